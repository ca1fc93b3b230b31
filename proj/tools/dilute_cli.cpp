#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dilute/dilute.h"

namespace {

struct Flags {
  std::optional<double> k, E, k_min, k_max, k_tol;
  std::optional<std::string> k_rational, seed;
  std::optional<int> points, m_max, l_max, n_max, q_max;
  std::optional<std::size_t> grid, box;
  std::optional<std::uint64_t> steps, burn_in;
  std::optional<std::uint32_t> replicas, eig_replicas;
  std::optional<unsigned> renorm_every;
  std::vector<double> k_list, rho_list;
  double rho = 0.05;
  std::string dist = "2:1";
  std::string format = "csv";
  std::string out;
  bool no_timestamp = false;
  unsigned threads = 1;
  // verify
  std::string suite = "fast";
  double gamma_inf_offset = 0.0;
  std::vector<int> only;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
  auto* energy = cmd->add_option_group("energy");
  energy->add_option("--k", f.k, "quasi-momentum k in (0, pi)");
  energy->add_option("--E", f.E, "energy E in (-2, 2)");
  energy->add_option("--k-rational", f.k_rational, "k = pi p/q, given as p/q");
  energy->require_option(0, 1);
  cmd->add_option("--rho", f.rho, "impurity density");
  cmd->add_option("--dist", f.dist, "impurity law v:w[,v:w]*");
  cmd->add_option("--steps", f.steps, "recorded Monte Carlo steps per replica");
  cmd->add_option("--burn-in", f.burn_in, "discarded steps per replica");
  cmd->add_option("--replicas", f.replicas, "independent replicas");
  cmd->add_option("--seed", f.seed, "master seed (decimal or 0x hex)");
  cmd->add_option("--m-max", f.m_max, "largest harmonic");
  cmd->add_option("--l-max", f.l_max, "transition coefficient window (0: automatic)");
  cmd->add_option("--n-max", f.n_max, "harmonic system truncation");
  cmd->add_option("--grid", f.grid, "quadrature grid, a power of two (0: automatic)");
  cmd->add_option("--q-max", f.q_max, "largest denominator treated as rational");
  cmd->add_option("--k-tol", f.k_tol, "tolerance for rational classification");
  cmd->add_option("--renorm-every", f.renorm_every, "matrix-product renormalization interval");
  cmd->add_option("--box", f.box, "box size for eigenvalue counting");
  cmd->add_option("--eig-replicas", f.eig_replicas, "realizations for eigenvalue counting");
  cmd->add_option("--out", f.out, "output file (default stdout)");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--no-timestamp", f.no_timestamp, "omit the timestamp header line");
  cmd->add_option("--threads", f.threads, "worker threads (0: all cores)");
}

nlohmann::json config_json(const std::string& command, const Flags& f) {
  nlohmann::json j;
  j["command"] = command;
  if (f.k) j["k"] = *f.k;
  if (f.E) j["E"] = *f.E;
  if (f.k_rational) j["k_rational"] = *f.k_rational;
  if (!f.k_list.empty()) j["k_list"] = f.k_list;
  if (f.k_min) j["k_min"] = *f.k_min;
  if (f.k_max) j["k_max"] = *f.k_max;
  if (f.points) j["points"] = *f.points;
  if (!f.rho_list.empty()) j["rho_list"] = f.rho_list;
  j["rho"] = f.rho;
  j["dist"] = f.dist;
  if (f.steps) j["steps"] = *f.steps;
  if (f.burn_in) j["burn_in"] = *f.burn_in;
  if (f.replicas) j["replicas"] = *f.replicas;
  if (f.seed) j["seed"] = *f.seed;
  if (f.m_max) j["m_max"] = *f.m_max;
  if (f.l_max) j["l_max"] = *f.l_max;
  if (f.n_max) j["n_max"] = *f.n_max;
  if (f.grid) j["grid"] = *f.grid;
  if (f.q_max) j["q_max"] = *f.q_max;
  if (f.k_tol) j["k_tol"] = *f.k_tol;
  if (f.renorm_every) j["renorm_every"] = *f.renorm_every;
  if (f.box) j["box"] = *f.box;
  if (f.eig_replicas) j["eig_replicas"] = *f.eig_replicas;
  j["format"] = f.format;
  j["timestamp"] = !f.no_timestamp;
  j["threads"] = f.threads;
  return j;
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return DL_OK;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os || !(os << text)) {
    std::cerr << "error: cannot write " << path << "\n";
    return DL_ERR_VALIDATION;
  }
  return DL_OK;
}

void print_progress(const char* line, void*) { std::cerr << line << "\n"; }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov exponent and density of states of the dilute Anderson chain"};
  app.require_subcommand(1);
  Flags f;

  std::vector<std::pair<std::string, std::string>> run_commands{
      {"lyapunov", "Lyapunov exponent estimates at one energy"},
      {"dos", "integrated density of states at one energy"},
      {"anomaly", "gamma_hat_q against gamma_hat_inf for q = 2..q-max"},
      {"harmonics", "oscillatory sums and harmonics of the invariant measure"},
      {"sweep-energy", "one row per k on a grid"},
      {"sweep-density", "one row per impurity density"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : run_commands) {
    auto* cmd = app.add_subcommand(name, help);
    add_run_flags(cmd, f);
    subs.push_back(cmd);
  }
  subs[4]->add_option("--k-list", f.k_list, "explicit k values")->delimiter(',');
  subs[4]->add_option("--k-min", f.k_min, "first k of the grid");
  subs[4]->add_option("--k-max", f.k_max, "last k of the grid");
  subs[4]->add_option("--points", f.points, "number of grid points");
  subs[5]->add_option("--rho-list", f.rho_list, "densities")->delimiter(',')->required();

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--suite", f.suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--seed", f.seed, "master seed");
  verify->add_option("--threads", f.threads, "worker threads");
  verify->add_option("--out", f.out, "write the JSON verdict here (default stdout)");
  verify->add_option("--only", f.only, "criteria to run")->delimiter(',');
  verify->add_option("--gamma-inf-offset", f.gamma_inf_offset,
                     "perturb the closed-form gamma_hat_inf (suite sensitivity check)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : DL_ERR_VALIDATION;
  }

  char* text = nullptr;
  dl_status status;
  if (verify->parsed()) {
    nlohmann::json vo{{"suite", f.suite}, {"threads", f.threads},
                      {"gamma_inf_offset", f.gamma_inf_offset}, {"only", f.only}};
    if (f.seed) vo["seed"] = *f.seed;
    status = dl_verify(vo.dump().c_str(), print_progress, nullptr, &text);
  } else {
    std::string command;
    for (auto* s : subs) {
      if (s->parsed()) command = s->get_name();
    }
    status = dl_run(config_json(command, f).dump().c_str(), &text);
  }
  if (text) {
    const int w = emit(text, f.out);
    dl_string_free(text);
    if (w != DL_OK) return w;
  }
  if (status != DL_OK) std::cerr << "error: " << dl_last_error() << "\n";
  return status;
}
