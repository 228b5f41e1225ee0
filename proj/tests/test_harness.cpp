#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "addisc/harness.hpp"

using namespace addisc;
using namespace addisc::harness;

TEST_CASE("fit_loglog: exact power law and constant") {
  const std::vector<LogLogPoint> square{{10, 100}, {100, 1e4}, {1000, 1e6}};
  const auto f = fit_loglog(square);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.n_min == 10);
  CHECK(f.n_max == 1000);
  CHECK(f.points == 3);

  const std::vector<LogLogPoint> flat{{10, 5}, {100, 5}, {1000, 5}};
  const auto c = fit_loglog(flat);
  CHECK(c.slope == doctest::Approx(0.0));
  CHECK(c.r_squared == 1.0);
}

TEST_CASE("fit_loglog: ordinary least squares on noisy data") {
  // ln y = 0.5 ln x + 1 + e with residuals e = (+0.1, -0.2, +0.1) (orthogonal to 1 and ln x
  // when ln x is equally spaced).
  std::vector<LogLogPoint> pts;
  const double e[] = {0.1, -0.2, 0.1};
  for (int i = 0; i < 3; ++i) {
    const double lx = std::log(10.0) * (i + 1);
    pts.push_back({std::exp(lx), std::exp(0.5 * lx + 1 + e[i])});
  }
  const auto f = fit_loglog(pts);
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-12));
  const double syy = 0.5 * 0.5 * 2 * std::pow(std::log(10.0), 2);  // explained part
  CHECK(f.r_squared == doctest::Approx(syy / (syy + 0.06)).epsilon(1e-12));
}

TEST_CASE("fit_loglog: errors") {
  const std::vector<LogLogPoint> two{{1, 1}, {2, 2}}, zero{{1, 1}, {2, 0}, {3, 3}}, same{{2, 1}, {2, 2}, {2, 3}};
  CHECK_THROWS_AS(fit_loglog(two), InvalidArgument);
  CHECK_THROWS_AS(fit_loglog(zero), InvalidArgument);
  CHECK_THROWS_AS(fit_loglog(same), InvalidArgument);
}

TEST_CASE("checkpoint parsing") {
  CHECK(parse_checkpoints("256,512,2^12") == std::vector<std::size_t>{256, 512, 4096});
  CHECK(parse_checkpoints(" 3 , 5 ") == std::vector<std::size_t>{3, 5});
  CHECK(default_checkpoints() == std::vector<std::size_t>{256, 512, 1024, 2048, 4096, 8192, 16384, 32768});
  CHECK_THROWS_AS(parse_checkpoints(""), InvalidArgument);
  CHECK_THROWS_AS(parse_checkpoints("5,3"), InvalidArgument);
  CHECK_THROWS_AS(parse_checkpoints("0,3"), InvalidArgument);
  CHECK_THROWS_AS(parse_checkpoints("3^2"), InvalidArgument);
  CHECK_THROWS_AS(parse_checkpoints("1,,2"), InvalidArgument);
  CHECK_THROWS_AS(parse_checkpoints("abc"), InvalidArgument);
}

namespace {

ExperimentConfig small_config(sequences::SequenceSpec spec) {
  ExperimentConfig c;
  c.spec = std::move(spec);
  c.alphas = 7;
  c.seed = 3;
  c.checkpoints = {64, 128, 256, 512};
  return c;
}

}  // namespace

TEST_CASE("run_experiment: contents") {
  const auto r = run_experiment(small_config(sequences::Kronecker{}));
  CHECK(r.generated_terms == 512);
  CHECK(r.energy.checkpoints.size() == 4);
  REQUIRE(r.kappa_fit);
  CHECK(r.kappa_hat().value() > 2.9);
  CHECK(r.metric.bands.size() == 4);
  CHECK(r.metric.alphas.size() == 7);
  CHECK(r.predicted_tau.value() == 0.0);
  CHECK(r.holder.size() == 4);
  CHECK(r.holder_ok());
  CHECK(r.convex.value() == false);
  CHECK_FALSE(r.started_at.empty());

  const auto j = report_to_json(r);
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("config").at("spec") == nlohmann::json::parse(R"({"family":"kronecker","params":{}})"));
  CHECK(j.at("config").at("seed") == 3);
  CHECK(j.at("energy").at("checkpoints").at(0).at("E") == "174784");
  CHECK(j.at("discrepancy").at("alpha_numerators").size() == 7);
  CHECK(j.at("tau_fit").at("slope").get<double>() == r.tau_hat());
  CHECK(j.at("holder").at("all_hold") == true);
  CHECK(j.at("tool").at("version") == kVersion);
}

TEST_CASE("run_experiment: caps skip energy and Hoelder checkpoints") {
  auto cfg = small_config(sequences::Polynomial{{0, 0, 1}});
  cfg.energy_window = 100000;  // 512^2 = 262144 is over the window
  cfg.histogram_cap = 256;
  cfg.panel_cap = std::uint64_t{1} << 20;
  const auto r = run_experiment(cfg);
  std::vector<std::size_t> ns;
  for (const auto& cp : r.energy.checkpoints) ns.push_back(cp.n);
  CHECK(ns == std::vector<std::size_t>{64, 128, 256});
  CHECK_FALSE(r.holder_skipped.empty());
  for (const auto& row : r.holder) CHECK(row.holds());
}

TEST_CASE("run_experiment: explicit lists have no predicted exponent") {
  std::vector<std::uint64_t> t;
  for (std::uint64_t k = 1; k <= 600; ++k) t.push_back(k * k * 3 + k);
  const auto r = run_experiment(small_config(sequences::ExplicitList{t}));
  CHECK_FALSE(r.predicted_tau.has_value());
  CHECK(report_to_json(r).at("predicted_tau").is_null());
}

TEST_CASE("reports rerun bit-identically from their embedded config") {
  for (const sequences::SequenceSpec& spec :
       std::vector<sequences::SequenceSpec>{sequences::RudinShapiro{}, sequences::FloorPower{1.5}}) {
    const auto first = report_to_json(run_experiment(small_config(spec)));
    const auto cfg = config_from_report(nlohmann::json::parse(first.dump()));
    const auto second = report_to_json(run_experiment(cfg));
    CHECK(reproducible_part(first).dump() == reproducible_part(second).dump());
    CHECK(first.contains("timestamps"));
    CHECK_FALSE(reproducible_part(first).contains("timestamps"));
  }
}

TEST_CASE("config JSON round trip and errors") {
  auto cfg = small_config(sequences::Lacunary{1.5});
  cfg.holder_tol = 1e-5;
  const auto back = config_from_json(config_to_json(cfg));
  CHECK(back.spec == cfg.spec);
  CHECK(back.seed == cfg.seed);
  CHECK(back.alphas == cfg.alphas);
  CHECK(back.checkpoints == cfg.checkpoints);
  CHECK(back.holder_tol == cfg.holder_tol);
  CHECK(back.panel_cap == cfg.panel_cap);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::object()), InvalidArgument);
  CHECK_THROWS_AS(config_from_report(nlohmann::json{{"schema_version", 99}}), InvalidArgument);
  CHECK_THROWS_AS(config_from_report(nlohmann::json::object()), InvalidArgument);
}

TEST_CASE("run_experiment: errors propagate") {
  auto cfg = small_config(sequences::Kronecker{});
  cfg.checkpoints = {64, 128};
  CHECK_THROWS_AS(run_experiment(cfg), InvalidArgument);
  cfg = small_config(sequences::Lacunary{2.0});
  CHECK_THROWS_AS(run_experiment(cfg), BudgetExceeded);
}

TEST_CASE("write_artifacts") {
  const auto dir = std::filesystem::temp_directory_path() / "addisc_artifacts_test";
  std::filesystem::remove_all(dir);
  write_artifacts(run_experiment(small_config(sequences::ThueMorse{})), dir);
  for (const char* name : {"report.json", "energy.csv", "median.csv", "holder.csv"})
    CHECK(std::filesystem::exists(dir / name));
  std::ifstream in(dir / "median.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "N,median_NDstar,q25,q75");
  std::ifstream energy(dir / "energy.csv");
  std::getline(energy, header);
  CHECK(header == "N,E,backend");
  std::ifstream holder(dir / "holder.csv");
  std::getline(holder, header);
  CHECK(header == "N,I,fourth_moment,holder_bound,panels");
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify suites") {
  CHECK(suite_from_name("rs") == Suite::rs);
  CHECK_THROWS_AS(suite_from_name("everything"), InvalidArgument);
  for (auto suite : {Suite::energy, Suite::discrepancy, Suite::expsum}) {
    const auto s = verify(suite);
    CHECK(s.passed());
    CHECK_FALSE(s.checks.empty());
    CHECK(s.to_json().at("passed") == true);
  }
  const auto rs = rs_verify(8, 20000);
  CHECK(rs.passed());
  for (const auto& c : rs.checks) CHECK(c.suite == "rs");

  VerifySummary a, b;
  a.checks.push_back({"x", "ok", true, ""});
  b.checks.push_back({"y", "broken", false, "detail"});
  a.merge(b);
  CHECK(a.checks.size() == 2);
  CHECK_FALSE(a.passed());
  CHECK(a.to_json().at("checks").at(1).at("detail") == "detail");
}
