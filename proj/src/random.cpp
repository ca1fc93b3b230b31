#include "dilute/random.hpp"

namespace dilute {

ImpuritySampler::ImpuritySampler(const DisorderSpec& d) : rho_(d.rho) {
  double acc = 0.0;
  for (const auto& a : d.atoms) {
    values_.push_back(a.value);
    acc += a.weight;
    cumulative_.push_back(acc);
  }
}

} // namespace dilute
