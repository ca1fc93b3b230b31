#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dilute {

/// Monte Carlo estimate with a batch-means standard error.
struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t n_batches = 0;
};

inline constexpr std::size_t kMinBatches = 16;

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Streams a correlated series of known length into contiguous batches.
/// The error bar is the standard deviation of batch means over sqrt(batches).
class BatchMeans {
public:
  BatchMeans(std::uint64_t n_total, std::size_t n_batches);

  void add(double x) {
    batch_sum_.add(x);
    if (++in_batch_ == batch_len(current_)) close_batch();
  }

  EstimateWithError finish() const;

private:
  std::uint64_t batch_len(std::size_t b) const {
    return (b + 1) * n_total_ / n_batches_ - b * n_total_ / n_batches_;
  }
  void close_batch();

  std::uint64_t n_total_;
  std::size_t n_batches_;
  std::size_t current_ = 0;
  std::uint64_t in_batch_ = 0;
  CompensatedSum batch_sum_;
  CompensatedSum total_;
  std::vector<double> means_;
};

/// Inverse-variance pooling of independent replicas. Replicas with zero error
/// (deterministic outcomes) dominate; if all are exact the plain mean is used.
EstimateWithError pool_inverse_variance(std::span<const EstimateWithError> parts);

/// Sample mean and standard error of independent values.
EstimateWithError mean_and_error(std::span<const double> values);

/// Weighted least squares fit y = a + b x; returns intercept, slope and their
/// standard errors (from the supplied sigmas, not rescaled).
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_se = 0.0;
  double slope_se = 0.0;
};
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> sigma);

} // namespace dilute
