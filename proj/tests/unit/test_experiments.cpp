#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dilute/experiments.hpp"

using namespace dilute;

namespace {

RunConfig small(const std::string& command) {
  RunConfig c;
  c.command = command;
  c.n_steps = 20'000;
  c.burn_in = 1000;
  c.replicas = 2;
  c.n_max = 16;
  c.box = 1000;
  c.eig_replicas = 2;
  c.timestamp = false;
  return c;
}

double num(const Table& t, std::size_t row, const char* col) {
  return std::get<double>(t.rows.at(row).at(t.column(col)));
}

bool empty(const Table& t, std::size_t row, const char* col) {
  return std::holds_alternative<std::monostate>(t.rows.at(row).at(t.column(col)));
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

} // namespace

TEST_CASE("CSV header is the documented schema") {
  auto c = small("sweep-energy");
  c.k_list = {1.0, 2.0};
  const auto out = lines(run_to_string(c));
  REQUIRE(out.size() == 5);
  CHECK(out[0] == "# dilute sweep-energy");
  CHECK(out[1].rfind("# config: {", 0) == 0);
  CHECK(out[2] ==
        "k,E,p,q,rho,gamma_mc,gamma_mc_se,gamma_mc2,gamma_mc2_se,gamma_hat_inf,gamma_hat_q_mc,"
        "gamma_hat_q_mc_se,gamma_hat_q_spectral,trunc_err,dos_rot,dos_rot_se,dos_pred,dos_eig,"
        "n_steps,seed");
}

TEST_CASE("timestamp line is optional") {
  auto c = small("dos");
  c.k = 1.0;
  const auto plain = lines(render(run_table(c), c, ""));
  const auto stamped = lines(render(run_table(c), c, "2026-01-01T00:00:00Z"));
  CHECK(stamped.size() == plain.size() + 1);
  CHECK(stamped[2] == "# timestamp: 2026-01-01T00:00:00Z");
  c.timestamp = true;
  CHECK(lines(run_to_string(c))[2].rfind("# timestamp: ", 0) == 0);
}

TEST_CASE("free chain rows") {
  auto c = small("lyapunov");
  c.k = 1.0;
  c.rho = 0.0;
  const auto t = run_table(c);
  CHECK(num(t, 0, "gamma_mc") == 0.0);
  CHECK(num(t, 0, "gamma_mc_se") == 0.0);
  CHECK(empty(t, 0, "gamma_ratio"));

  auto s = small("sweep-energy");
  s.rho = 0.0;
  s.k_min = 0.5;
  s.k_max = 2.5;
  s.points = 3;
  const auto sw = run_table(s);
  REQUIRE(sw.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(num(sw, i, "gamma_mc") == 0.0);
    CHECK(num(sw, i, "dos_rot") == doctest::Approx(num(sw, i, "k")).epsilon(1e-15));
  }
}

TEST_CASE("rational routing") {
  auto c = small("lyapunov");
  c.k_rational = Rational{1, 2};
  const auto t = run_table(c);
  CHECK(std::get<std::int64_t>(t.rows[0][t.column("q")]) == 2);
  CHECK(std::get<std::int64_t>(t.rows[0][t.column("p")]) == 1);
  CHECK_FALSE(empty(t, 0, "gamma_hat_q_spectral"));
  CHECK_FALSE(empty(t, 0, "gamma_hat_q_mc"));
  CHECK(num(t, 0, "gamma_ratio") == doctest::Approx(num(t, 0, "gamma_mc") / c.rho));

  c.k_rational.reset();
  c.k = 1.9416110387254666;
  const auto g = run_table(c);
  CHECK(empty(g, 0, "q"));
  CHECK(empty(g, 0, "gamma_hat_q_spectral"));
  CHECK_FALSE(empty(g, 0, "gamma_hat_inf"));
}

TEST_CASE("energy sweep shows the spike at a rational point") {
  auto c = small("sweep-energy");
  c.k_list = {kPi / 2 + 0.05, kPi / 2, kPi / 2 - 0.05};
  c.q_max = 8;
  const auto t = run_table(c);
  REQUIRE(t.rows.size() == 3);
  CHECK(num(t, 0, "k") < num(t, 1, "k"));
  CHECK(num(t, 1, "k") < num(t, 2, "k"));
  CHECK(empty(t, 0, "gamma_hat_q_spectral"));
  CHECK(empty(t, 2, "gamma_hat_q_spectral"));
  const double spike = num(t, 1, "gamma_hat_q_spectral");
  CHECK(spike - num(t, 0, "gamma_hat_inf") > 0.1);
  CHECK(spike - num(t, 2, "gamma_hat_inf") > 0.1);
}

TEST_CASE("output is deterministic and thread independent") {
  auto c = small("sweep-density");
  c.k = 1.3;
  c.rho_list = {0.3, 0.1, 0.2};
  const auto a = run_to_string(c);
  CHECK(a == run_to_string(c));
  c.threads = 3;
  CHECK(a == run_to_string(c));
  c.seed = 2;
  CHECK(a != run_to_string(c));
}

TEST_CASE("density sweep keeps the requested order and energy") {
  auto c = small("sweep-density");
  c.E = 0.5;
  c.rho_list = {0.05, 0.2};
  const auto t = run_table(c);
  REQUIRE(t.rows.size() == 2);
  CHECK(num(t, 0, "rho") == 0.05);
  CHECK(num(t, 1, "E") == doctest::Approx(0.5));
  CHECK(num(t, 1, "gamma_mc") > num(t, 0, "gamma_mc"));
}

TEST_CASE("anomaly, dos and harmonics tables") {
  auto a = small("anomaly");
  a.q_max = 5;
  const auto an = run_table(a);
  REQUIRE(an.rows.size() == 4);
  CHECK(std::get<std::int64_t>(an.rows[3][an.column("q")]) == 5);
  CHECK(std::get<std::int64_t>(an.rows[3][an.column("p")]) == 2);
  CHECK(empty(an, 0, "gamma_mc"));

  auto d = small("dos");
  d.k = 1.0;
  const auto dt = run_table(d);
  CHECK(empty(dt, 0, "gamma_mc"));
  CHECK(std::abs(num(dt, 0, "dos_rot") - num(dt, 0, "dos_eig")) < 0.05);
  CHECK(std::abs(num(dt, 0, "dos_rot") - num(dt, 0, "dos_pred")) < 0.01);

  auto h = small("harmonics");
  h.k_rational = Rational{1, 3};
  h.m_max = 6;
  const auto ht = run_table(h);
  REQUIRE(ht.rows.size() == 7);
  CHECK(num(ht, 0, "I_re") == 1.0);
  CHECK(num(ht, 0, "J_re") == 1.0);
  CHECK(empty(ht, 1, "J_re"));
  CHECK_FALSE(empty(ht, 3, "J_re"));
  CHECK(std::abs(num(ht, 1, "Ihat_re")) <= 3 * num(ht, 1, "Ihat_se") + 1e-12);
}

TEST_CASE("JSON output") {
  auto c = small("dos");
  c.k = 1.0;
  c.format = "json";
  const auto j = nlohmann::json::parse(run_to_string(c));
  CHECK(j["config"]["command"] == "dos");
  CHECK(j["rows"].size() == 1);
  CHECK(j["rows"][0]["gamma_mc"].is_null());
  CHECK(j["rows"][0]["k"] == 1.0);
  CHECK_FALSE(j.contains("timestamp"));
}

TEST_CASE("configuration round trip and validation") {
  auto c = small("sweep-energy");
  c.k_list = {0.5, 1.5};
  c.seed = 0xdeadbeefULL;
  c.k_rational = Rational{2, 5};
  const auto back = run_config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(back.k_rational == c.k_rational);

  auto bad = [](auto mutate) {
    auto c = small("lyapunov");
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(run_table(bad([](RunConfig& c) { c.command = "nope"; })), ValidationError);
  CHECK_THROWS_AS(run_table(bad([](RunConfig& c) { c.k = 1.0; c.E = 0.0; })), ValidationError);
  CHECK_THROWS_AS(run_table(bad([](RunConfig& c) { c.k = 4.0; })), ValidationError);
  CHECK_THROWS_AS(run_table(bad([](RunConfig& c) { c.n_steps = 100; })), ValidationError);
  CHECK_THROWS_AS(run_table(bad([](RunConfig& c) { c.format = "xml"; })), ValidationError);
  CHECK_THROWS_AS(run_table(bad([](RunConfig& c) { c.dist = "1:-1"; })), ValidationError);
  CHECK_THROWS_AS(run_table(bad([](RunConfig& c) { c.n_grid = 100; })), ValidationError);
  CHECK_THROWS_AS(run_table(bad([](RunConfig& c) { c.command = "sweep-energy"; c.k_list = {1.0}; })),
                  ValidationError);
  CHECK_THROWS_AS(run_table(bad([](RunConfig& c) { c.command = "sweep-density"; })), ValidationError);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json{{"steps", "many"}}), ValidationError);
}
