#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dilute {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string summary;
  nlohmann::json observed;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::string suite = "fast";  // fast | full
  std::uint64_t seed = 0x5eed2024;
  unsigned threads = 1;
  /// Added to every closed-form gamma_hat_inf the suite uses (mutation test).
  double gamma_inf_offset = 0.0;
  /// Criteria to run; empty runs all twelve.
  std::vector<int> only;
  std::function<void(const CriterionResult&)> on_result;
};

struct VerifyReport {
  std::string suite;
  std::vector<CriterionResult> results;

  bool passed() const;
  nlohmann::json to_json() const;
};

VerifyReport run_verification(const VerifyOptions& opt);

/// Constants frozen from a one-time calibration run; see calibrate().
struct Calibration {
  double rational_branch_c = 0.0;  // |gamma/rho - gamma_hat_q| <= c rho
  double harmonic_c = 0.0;         // |I_m| <= c rho, m not divisible by q
  double dos_c = 0.0;              // |N_pred - N_rot| <= c rho^2
};

const Calibration& frozen_calibration();

/// Re-measures the calibration ratios on an independent seed and at densities
/// the suite does not test.
nlohmann::json calibrate(std::uint64_t seed, unsigned threads);

} // namespace dilute
