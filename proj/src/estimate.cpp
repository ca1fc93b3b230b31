#include "dilute/estimate.hpp"

#include <cmath>

#include "dilute/model.hpp"

namespace dilute {

BatchMeans::BatchMeans(std::uint64_t n_total, std::size_t n_batches)
    : n_total_(n_total), n_batches_(n_batches) {
  if (n_batches_ < kMinBatches) {
    throw ValidationError("batch-means error bars need at least 16 batches");
  }
  if (n_total_ < n_batches_) {
    throw ValidationError("series of length " + std::to_string(n_total) +
                          " is shorter than the number of batches");
  }
  means_.reserve(n_batches_);
}

void BatchMeans::close_batch() {
  const double s = batch_sum_.value();
  total_.add(s);
  means_.push_back(s / static_cast<double>(in_batch_));
  batch_sum_ = {};
  in_batch_ = 0;
  ++current_;
}

EstimateWithError BatchMeans::finish() const {
  if (current_ != n_batches_) {
    throw ConsistencyError("batch-means series finished early");
  }
  EstimateWithError out;
  out.value = total_.value() / static_cast<double>(n_total_);
  out.n_samples = n_total_;
  out.n_batches = n_batches_;
  double mean = 0.0;
  for (double m : means_) mean += m;
  mean /= static_cast<double>(means_.size());
  double ss = 0.0;
  for (double m : means_) ss += (m - mean) * (m - mean);
  const double nb = static_cast<double>(means_.size());
  out.std_error = std::sqrt(ss / (nb - 1.0) / nb);
  return out;
}

EstimateWithError pool_inverse_variance(std::span<const EstimateWithError> parts) {
  EstimateWithError out;
  if (parts.empty()) return out;
  std::size_t exact = 0;
  double exact_sum = 0.0;
  double wsum = 0.0;
  double wvsum = 0.0;
  for (const auto& p : parts) {
    out.n_samples += p.n_samples;
    out.n_batches += p.n_batches;
    if (p.std_error == 0.0) {
      ++exact;
      exact_sum += p.value;
    } else {
      const double w = 1.0 / (p.std_error * p.std_error);
      wsum += w;
      wvsum += w * p.value;
    }
  }
  if (exact > 0) {
    out.value = exact_sum / static_cast<double>(exact);
    out.std_error = 0.0;
  } else {
    out.value = wvsum / wsum;
    out.std_error = std::sqrt(1.0 / wsum);
  }
  return out;
}

EstimateWithError mean_and_error(std::span<const double> values) {
  EstimateWithError out;
  const double n = static_cast<double>(values.size());
  out.n_samples = values.size();
  out.n_batches = values.size();
  if (values.empty()) return out;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  out.value = mean;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    out.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() != sigma.size() || x.size() < 2) {
    throw ValidationError("linear fit needs at least two points with matching sizes");
  }
  double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (sigma[i] * sigma[i]);
    s += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  const double det = s * sxx - sx * sx;
  LinearFit f;
  f.intercept = (sxx * sy - sx * sxy) / det;
  f.slope = (s * sxy - sx * sy) / det;
  f.intercept_se = std::sqrt(sxx / det);
  f.slope_se = std::sqrt(s / det);
  return f;
}

} // namespace dilute
