#include "dilute/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <stdexcept>

#include <json.hpp>

#include "dilute/arith.hpp"
#include "dilute/dos.hpp"
#include "dilute/harmonics.hpp"
#include "dilute/lyapunov.hpp"
#include "dilute/parallel.hpp"

namespace dilute {

std::size_t Table::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column " + std::string(name));
  return static_cast<std::size_t>(it - columns.begin());
}

const std::vector<std::string>& point_columns() {
  static const std::vector<std::string> cols{
      "k",          "E",           "p",        "q",
      "rho",        "gamma_mc",    "gamma_mc_se", "gamma_mc2",
      "gamma_mc2_se", "gamma_hat_inf", "gamma_hat_q_mc", "gamma_hat_q_mc_se",
      "gamma_hat_q_spectral", "trunc_err", "dos_rot", "dos_rot_se",
      "dos_pred",   "dos_eig",     "n_steps",  "seed"};
  return cols;
}

namespace {

// Stream index layout: row in the high bits, then the quantity, then the
// replica. Each (row, quantity, replica) owns a distinct stream.
constexpr std::uint64_t kReplicaBits = 16;
constexpr std::uint64_t kComponentBits = 4;

enum Component : std::uint64_t {
  kGammaTelescopic = 0,
  kGammaMatrix = 1,
  kHatGrid = 2,
  kDosRotation = 3,
  kDosEigen = 4,
  kHarmonics = 5,
  kHatHarmonics = 6,
};

std::uint64_t stream_base(std::size_t row, Component c) {
  return (static_cast<std::uint64_t>(row) << (kReplicaBits + kComponentBits)) |
         (static_cast<std::uint64_t>(c) << kReplicaBits);
}

struct Point {
  EnergyPoint e;
  std::optional<Rational> pq;
  double rho = 0.0;
};

struct Parts {
  bool gamma = false;
  bool hat = false;
  bool dos = false;
};

McOptions mc_options(const RunConfig& c, std::size_t row, Component comp) {
  McOptions o;
  o.n_steps = c.n_steps;
  o.burn_in = c.burn_in;
  o.replicas = c.replicas;
  o.seed = c.seed;
  o.stream_base = stream_base(row, comp);
  o.threads = 1;
  return o;
}

std::optional<Rational> classify(double k, const RunConfig& c) {
  const auto cls = classify_k(k, c.q_max, c.k_tol);
  if (cls.is_rational()) return cls.pq;
  return std::nullopt;
}

Point point_from_config(const RunConfig& c) {
  Point pt;
  pt.rho = c.rho;
  if (c.k_rational) {
    pt.e = energy_from_rational(*c.k_rational);
    pt.pq = *c.k_rational;
  } else {
    pt.e = c.E ? energy_from_E(*c.E) : energy_from_k(c.k.value_or(kPi / 2));
    pt.pq = classify(pt.e.k, c);
  }
  return pt;
}

std::vector<Cell> compute_row(const RunConfig& c, const Point& pt, std::size_t row,
                              const Parts& parts) {
  const auto& cols = point_columns();
  std::vector<Cell> out(cols.size());
  auto set = [&](std::string_view name, Cell v) {
    out[static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin())] = v;
  };
  const DisorderSpec disorder = parse_disorder(c.dist, pt.rho);
  set("k", pt.e.k);
  set("E", pt.e.E);
  if (pt.pq) {
    set("p", pt.pq->p);
    set("q", pt.pq->q);
  }
  set("rho", pt.rho);
  set("seed", c.seed);

  bool sampled = false;
  if (parts.gamma) {
    const auto tel = gamma_mc_telescopic(pt.e, disorder, mc_options(c, row, kGammaTelescopic));
    const auto mat = gamma_mc_matrix_product(pt.e, disorder, c.renorm_every,
                                             mc_options(c, row, kGammaMatrix));
    set("gamma_mc", tel.gamma.value);
    set("gamma_mc_se", tel.gamma.std_error);
    set("gamma_mc2", mat.gamma.value);
    set("gamma_mc2_se", mat.gamma.std_error);
    sampled = true;
  }
  if (parts.gamma || parts.hat) {
    set("gamma_hat_inf", gamma_hat_infinity(pt.e, disorder).gamma.value);
  }
  if (parts.hat && pt.pq) {
    const int q = static_cast<int>(pt.pq->q);
    const auto mc = gamma_hat_q_mc(pt.e, disorder, q, mc_options(c, row, kHatGrid));
    set("gamma_hat_q_mc", mc.gamma.value);
    set("gamma_hat_q_mc_se", mc.gamma.std_error);
    SpectralOptions so;
    so.n_max = c.n_max;
    so.l_max = c.l_max;
    so.n_grid = c.n_grid;
    const auto sp = gamma_hat_q_spectral(pt.e, disorder, q, so);
    set("gamma_hat_q_spectral", sp.value);
    set("trunc_err", sp.truncation_error);
    sampled = true;
  }
  if (parts.dos) {
    const auto rot = dos_rotation(pt.e, disorder, mc_options(c, row, kDosRotation));
    set("dos_rot", rot.value);
    set("dos_rot_se", rot.error.std_error);
    LowDensityOptions lo;
    if (pt.pq) {
      lo.measure = LowDensityOptions::Measure::grid_spectral;
      lo.q = static_cast<int>(pt.pq->q);
      lo.n_max = std::max(c.n_max, 1);
    }
    set("dos_pred", dos_lowdensity(pt.e, disorder, lo).value);
    const auto eig = dos_eigencount(pt.e, disorder, c.box, c.eig_replicas, c.seed,
                                    stream_base(row, kDosEigen));
    set("dos_eig", eig.value);
    sampled = true;
  }
  if (sampled) set("n_steps", c.n_steps);
  return out;
}

Table point_table(const RunConfig& c, const std::vector<Point>& points, const Parts& parts) {
  Table t;
  t.columns = point_columns();
  t.rows.resize(points.size());
  parallel_for(points.size(), c.threads,
               [&](std::size_t i) { t.rows[i] = compute_row(c, points[i], i, parts); });
  return t;
}

std::vector<double> sweep_ks(const RunConfig& c) {
  std::vector<double> ks = c.k_list;
  if (ks.empty()) {
    for (int i = 0; i < c.points; ++i) {
      ks.push_back(*c.k_min + (*c.k_max - *c.k_min) * i / (c.points - 1));
    }
  }
  std::sort(ks.begin(), ks.end());
  return ks;
}

Table lyapunov_table(const RunConfig& c) {
  Table t = point_table(c, {point_from_config(c)}, {true, true, false});
  t.columns.push_back("gamma_ratio");
  t.columns.push_back("gamma_ratio_se");
  for (auto& row : t.rows) {
    if (c.rho > 0.0) {
      row.push_back(std::get<double>(row[t.column("gamma_mc")]) / c.rho);
      row.push_back(std::get<double>(row[t.column("gamma_mc_se")]) / c.rho);
    } else {
      row.emplace_back();
      row.emplace_back();
    }
  }
  return t;
}

Table anomaly_table(const RunConfig& c) {
  std::vector<Point> points;
  for (int q = 2; q <= c.q_max; ++q) {
    const Rational r{central_numerator(q), q};
    points.push_back({energy_from_rational(r), r, c.rho});
  }
  return point_table(c, points, {false, true, false});
}

Table harmonics_table(const RunConfig& c) {
  const Point pt = point_from_config(c);
  const DisorderSpec disorder = parse_disorder(c.dist, pt.rho);
  const int m_max = c.m_max;
  const auto phys = oscillatory_sums_mc(pt.e, disorder, m_max, mc_options(c, 0, kHarmonics));
  const PsiLaw law = pt.pq ? PsiLaw::grid(static_cast<int>(pt.pq->q)) : PsiLaw::uniform();
  const auto hat =
      hat_oscillatory_sums_mc(pt.e, disorder, law, m_max, mc_options(c, 0, kHatHarmonics));
  std::optional<HarmonicSolution> sol;
  if (pt.pq) {
    sol = solve_harmonic_system(pt.e, disorder, static_cast<int>(pt.pq->q), std::max(c.n_max, 1),
                                c.l_max, c.n_grid);
  }
  Table t;
  t.columns = {"m", "k", "p", "q", "rho", "I_re", "I_im", "I_se",
               "Ihat_re", "Ihat_im", "Ihat_se", "J_re", "J_im", "n_steps", "seed"};
  for (int m = 0; m <= m_max; ++m) {
    std::vector<Cell> row(t.columns.size());
    row[0] = static_cast<std::int64_t>(m);
    row[1] = pt.e.k;
    if (pt.pq) {
      row[2] = pt.pq->p;
      row[3] = pt.pq->q;
    }
    row[4] = pt.rho;
    row[5] = phys.at(m).real();
    row[6] = phys.at(m).imag();
    row[7] = phys.error(m);
    row[8] = hat.at(m).real();
    row[9] = hat.at(m).imag();
    row[10] = hat.error(m);
    if (sol && m % sol->q == 0 && m / sol->q <= sol->n_max) {
      row[11] = sol->at(m / sol->q).real();
      row[12] = sol->at(m / sol->q).imag();
    }
    row[13] = c.n_steps;
    row[14] = c.seed;
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

nlohmann::json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return v;
        }
      },
      cell);
}

} // namespace

Table run_table(const RunConfig& config) {
  config.validate();
  if (config.replicas >= (1u << kReplicaBits)) throw ValidationError("too many replicas");
  const auto& cmd = config.command;
  if (cmd == "lyapunov") return lyapunov_table(config);
  if (cmd == "dos") return point_table(config, {point_from_config(config)}, {false, false, true});
  if (cmd == "anomaly") return anomaly_table(config);
  if (cmd == "harmonics") return harmonics_table(config);
  if (cmd == "sweep-energy") {
    std::vector<Point> points;
    for (double k : sweep_ks(config)) points.push_back({energy_from_k(k), classify(k, config), config.rho});
    return point_table(config, points, {true, true, true});
  }
  if (cmd == "sweep-density") {
    const Point base = point_from_config(config);
    std::vector<Point> points;
    for (double r : config.rho_list) points.push_back({base.e, base.pq, r});
    return point_table(config, points, {true, true, true});
  }
  throw ValidationError("command '" + cmd + "' does not produce a table");
}

std::string render(const Table& table, const RunConfig& config, std::string_view timestamp) {
  const auto cfg = to_json(config, false);
  if (config.format == "json") {
    nlohmann::json doc;
    doc["config"] = cfg;
    if (!timestamp.empty()) doc["timestamp"] = std::string(timestamp);
    doc["columns"] = table.columns;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json rec = nlohmann::json::object();
      for (std::size_t i = 0; i < row.size(); ++i) rec[table.columns[i]] = cell_json(row[i]);
      doc["rows"].push_back(std::move(rec));
    }
    return doc.dump(2) + "\n";
  }
  std::string out = "# dilute " + config.command + "\n# config: " + cfg.dump() + "\n";
  if (!timestamp.empty()) out += "# timestamp: " + std::string(timestamp) + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + table.columns[i];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += cell_text(row[i]);
    }
    out += "\n";
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string run_to_string(const RunConfig& config) {
  const Table t = run_table(config);
  return render(t, config, config.timestamp ? utc_timestamp() : std::string());
}

} // namespace dilute
