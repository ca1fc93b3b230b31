#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dilute/model.hpp"

namespace dilute {

/// 64-bit avalanche finalizer (SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Identifies one reproducible random stream. Every Monte Carlo task derives
/// its own stream so results do not depend on scheduling.
struct RngContract {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  constexpr std::uint64_t task_seed() const {
    return mix64(master_seed ^ mix64(stream_index + 0x9E3779B97F4A7C15ULL));
  }
  constexpr RngContract substream(std::uint64_t offset) const {
    return {master_seed, stream_index + offset};
  }
};

/// mt19937_64 has a sequence fixed by the standard; the double conversion is
/// done by hand because uniform_real_distribution is implementation defined.
class Rng {
public:
  explicit Rng(const RngContract& c) : engine_(c.task_seed()) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

private:
  std::mt19937_64 engine_;
};

/// Draws v from (1 - rho) delta_0 + rho * p~ with one uniform per site.
class ImpuritySampler {
public:
  explicit ImpuritySampler(const DisorderSpec& d);

  double rho() const { return rho_; }

  double operator()(Rng& rng) const {
    const double u = rng.uniform();
    if (u >= rho_) return 0.0;
    return pick(u / rho_);
  }

  /// Draw from p~ alone (every site an impurity).
  double impurity(Rng& rng) const {
    if (values_.size() == 1) return values_[0];
    return pick(rng.uniform());
  }

private:
  double pick(double u) const {
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
      if (u < cumulative_[i]) return values_[i];
    }
    return values_.back();
  }

  double rho_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

} // namespace dilute
