#include "dilute/run_config.hpp"

#include <algorithm>
#include <array>

namespace dilute {

namespace {

constexpr std::array kCommands{"lyapunov", "dos", "anomaly", "harmonics",
                               "sweep-energy", "sweep-density", "verify"};

} // namespace

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw ValidationError("unknown command '" + command + "'");
  }
  const int energy_specs = k.has_value() + E.has_value() + k_rational.has_value();
  if (energy_specs > 1) throw ValidationError("give at most one of --k, --E, --k-rational");
  if (k) (void)energy_from_k(*k);
  if (E) (void)energy_from_E(*E);
  if (k_rational) (void)energy_from_rational(*k_rational);
  (void)disorder();
  for (double r : rho_list) (void)make_disorder({{1.0, 1.0}}, r);
  if (format != "csv" && format != "json") throw ValidationError("--format must be csv or json");
  if (replicas < 1) throw ValidationError("--replicas must be at least 1");
  if (n_steps < 10'000 && command != "verify") {
    throw ValidationError("--steps must be at least 10000");
  }
  if (renorm_every < 1 || renorm_every > 50) throw ValidationError("renorm_every must lie in [1, 50]");
  if (m_max < 1) throw ValidationError("--m-max must be at least 1");
  if (n_max < 0) throw ValidationError("--n-max must be non-negative");
  if (l_max < 0) throw ValidationError("--l-max must be non-negative");
  if (q_max < 2) throw ValidationError("--q-max must be at least 2");
  if (box < 2) throw ValidationError("--box must be at least 2");
  if (n_grid != 0 && (n_grid & (n_grid - 1)) != 0) throw ValidationError("--grid must be a power of two");
  if (command == "sweep-energy") {
    if (k_list.empty()) {
      if (!k_min || !k_max || points < 2) {
        throw ValidationError("sweep-energy needs --k-list or --k-min, --k-max and --points >= 2");
      }
      (void)energy_from_k(*k_min);
      (void)energy_from_k(*k_max);
      if (!(*k_min < *k_max)) throw ValidationError("--k-min must be below --k-max");
    } else {
      if (k_list.size() < 2) throw ValidationError("sweep-energy needs at least two k values");
      for (double kk : k_list) (void)energy_from_k(kk);
    }
  }
  if (command == "sweep-density" && rho_list.empty()) {
    throw ValidationError("sweep-density needs --rho-list");
  }
  if (command == "verify" && suite != "fast" && suite != "full") {
    throw ValidationError("--suite must be fast or full");
  }
}

nlohmann::json to_json(const RunConfig& c, bool with_threads) {
  nlohmann::json j;
  j["command"] = c.command;
  if (c.k) j["k"] = *c.k;
  if (c.E) j["E"] = *c.E;
  if (c.k_rational) j["k_rational"] = std::to_string(c.k_rational->p) + "/" + std::to_string(c.k_rational->q);
  if (!c.k_list.empty()) j["k_list"] = c.k_list;
  if (c.k_min) j["k_min"] = *c.k_min;
  if (c.k_max) j["k_max"] = *c.k_max;
  if (c.points) j["points"] = c.points;
  if (!c.rho_list.empty()) j["rho_list"] = c.rho_list;
  j["rho"] = c.rho;
  j["dist"] = c.dist;
  j["steps"] = c.n_steps;
  j["burn_in"] = c.burn_in;
  j["replicas"] = c.replicas;
  j["seed"] = c.seed;
  j["renorm_every"] = c.renorm_every;
  j["m_max"] = c.m_max;
  j["l_max"] = c.l_max;
  j["n_max"] = c.n_max;
  j["grid"] = c.n_grid;
  j["q_max"] = c.q_max;
  j["k_tol"] = c.k_tol;
  j["box"] = c.box;
  j["eig_replicas"] = c.eig_replicas;
  j["format"] = c.format;
  j["timestamp"] = c.timestamp;
  if (with_threads) j["threads"] = c.threads;
  if (c.command == "verify") j["suite"] = c.suite;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("command", c.command);
    if (j.contains("k")) c.k = j.at("k").get<double>();
    if (j.contains("E")) c.E = j.at("E").get<double>();
    if (j.contains("k_rational")) c.k_rational = parse_rational(j.at("k_rational").get<std::string>());
    get("k_list", c.k_list);
    if (j.contains("k_min")) c.k_min = j.at("k_min").get<double>();
    if (j.contains("k_max")) c.k_max = j.at("k_max").get<double>();
    get("points", c.points);
    get("rho_list", c.rho_list);
    get("rho", c.rho);
    get("dist", c.dist);
    get("steps", c.n_steps);
    get("burn_in", c.burn_in);
    get("replicas", c.replicas);
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      c.seed = s.is_string() ? parse_seed(s.get<std::string>()) : s.get<std::uint64_t>();
    }
    get("renorm_every", c.renorm_every);
    get("m_max", c.m_max);
    get("l_max", c.l_max);
    get("n_max", c.n_max);
    get("grid", c.n_grid);
    get("q_max", c.q_max);
    get("k_tol", c.k_tol);
    get("box", c.box);
    get("eig_replicas", c.eig_replicas);
    get("format", c.format);
    get("timestamp", c.timestamp);
    get("threads", c.threads);
    get("suite", c.suite);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed run configuration: ") + e.what());
  }
  return c;
}

} // namespace dilute
