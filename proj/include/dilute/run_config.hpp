#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilute/model.hpp"

namespace dilute {

/// Everything a CLI run depends on. Serializes to JSON and is echoed into
/// every output file.
struct RunConfig {
  std::string command = "lyapunov";

  // Energy: at most one of k, E, k_rational.
  std::optional<double> k;
  std::optional<double> E;
  std::optional<Rational> k_rational;

  // Energy sweep: explicit list, or k_min..k_max with `points` values.
  std::vector<double> k_list;
  std::optional<double> k_min;
  std::optional<double> k_max;
  int points = 0;

  // Density sweep.
  std::vector<double> rho_list;

  double rho = 0.05;
  std::string dist = "2:1";

  std::uint64_t n_steps = 1'000'000;
  std::uint64_t burn_in = 10'000;
  std::uint32_t replicas = 4;
  std::uint64_t seed = 1;
  unsigned renorm_every = 20;

  int m_max = 8;
  int l_max = 0;
  int n_max = 32;
  std::size_t n_grid = 0;
  int q_max = 12;
  double k_tol = 1e-9;

  std::size_t box = 10'000;
  std::uint32_t eig_replicas = 8;

  std::string format = "csv";
  bool timestamp = true;
  unsigned threads = 1;

  std::string suite = "fast";

  DisorderSpec disorder() const { return parse_disorder(dist, rho); }
  /// Throws ValidationError describing the first problem found.
  void validate() const;
};

/// `with_threads = false` leaves out the thread count, which never changes
/// results; output headers use that form.
nlohmann::json to_json(const RunConfig& c, bool with_threads = true);
RunConfig run_config_from_json(const nlohmann::json& j);

} // namespace dilute
