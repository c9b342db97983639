#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fqmci/bench.hpp"
#include "fqmci/distribution.hpp"
#include "test_util.hpp"

using namespace fqmci;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fqmci_bench_" + name);
}

std::string write_text(const std::string& name, const std::string& content) {
  auto path = temp_file(name);
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path.string();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SweepReport synthetic_report(double a_scale, double a_power) {
  // method "a": a_scale * q^a_power, method "b": q^-1/2, on a shared grid.
  SweepReport report;
  std::int64_t depth = 1;
  for (double q : {10.0, 100.0, 1000.0, 10000.0}) {
    SweepRow ra{"a", static_cast<std::int64_t>(q), 0.0,
                a_scale * std::pow(q, a_power), q, depth};
    report.rows.push_back(ra);
    depth *= 2;
  }
  for (double q : {10.0, 100.0, 1000.0, 10000.0}) {
    SweepRow rb{"b", static_cast<std::int64_t>(q), 0.0, 1.0 / std::sqrt(q), q, 0};
    report.rows.push_back(rb);
  }
  return report;
}

}  // namespace

TEST_CASE("slope fits recover exact power laws") {
  std::vector<std::pair<double, double>> xy;
  for (double q : {10.0, 100.0, 1000.0, 10000.0}) xy.emplace_back(q, 5.0 / q);
  CHECK(fit_slope(xy) == doctest::Approx(-1.0).epsilon(1e-12));

  xy.clear();
  for (double q : {4.0, 16.0, 256.0}) xy.emplace_back(q, 3.0 * std::sqrt(q));
  CHECK(fit_slope(xy) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(fit_slope({{1.0, 1.0}, {2.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_slope({{1.0, 1.0}, {2.0, 0.0}, {3.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_slope({{1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}}),
                  std::invalid_argument);
}

TEST_CASE("crossover detection") {
  SUBCASE("strict crossing between grid points") {
    // 20/q meets 1/sqrt(q) at q = 400; both curves are straight lines in
    // log-log space, so piecewise-linear interpolation hits it exactly.
    SweepReport report = synthetic_report(20.0, -1.0);
    CrossoverResult res = find_crossover(report, "a", "b");
    REQUIRE(res.found);
    CHECK_FALSE(res.degenerate);
    CHECK(res.queries == doctest::Approx(400.0).epsilon(1e-9));
    CHECK(res.depth_at == 4);  // first "a" row at or past the crossing
  }

  SUBCASE("already ahead at the overlap start") {
    SweepReport report = synthetic_report(0.1, -0.5);
    CrossoverResult res = find_crossover(report, "a", "b");
    REQUIRE(res.found);
    CHECK(res.queries == doctest::Approx(10.0).epsilon(1e-9));
  }

  SUBCASE("never crosses") {
    SweepReport report = synthetic_report(10.0, -0.5);
    CrossoverResult res = find_crossover(report, "a", "b");
    CHECK_FALSE(res.found);
  }

  SUBCASE("identical curves are reported as degenerate") {
    SweepReport report = synthetic_report(1.0, -0.5);
    CrossoverResult res = find_crossover(report, "a", "b");
    REQUIRE(res.found);
    CHECK(res.degenerate);
    CHECK(res.queries == doctest::Approx(10.0).epsilon(1e-9));
  }

  SUBCASE("missing methods") {
    SweepReport report = synthetic_report(1.0, -1.0);
    CHECK_FALSE(find_crossover(report, "a", "c").found);
  }
}

TEST_CASE("budget grids are geometric") {
  SweepConfig cfg;
  cfg.budget_min = 100;
  cfg.budget_max = 1000000;
  cfg.budget_points = 7;
  auto grid = budget_grid(cfg);
  std::vector<std::int64_t> want = {100, 464, 2154, 10000, 46416, 215443, 1000000};
  CHECK(grid == want);

  cfg.budget_min = cfg.budget_max = 500;
  cfg.budget_points = 1;
  CHECK(budget_grid(cfg) == std::vector<std::int64_t>{500});

  cfg.budget_max = 501;
  CHECK_THROWS_AS(budget_grid(cfg), std::invalid_argument);

  cfg.budget_min = 1;
  cfg.budget_max = 2;
  cfg.budget_points = 5;
  CHECK_THROWS_AS(budget_grid(cfg), std::invalid_argument);  // rounding collides
}

TEST_CASE("sweep config parsing") {
  std::string path = write_text("parse.cfg",
                                "# demo\n"
                                "distribution = /data/ref.dist\n"
                                "function = square\n"
                                "methods = classical, fourier\n"
                                "budget_min = 100\n"
                                "budget_max = 10000\n"
                                "budget_points = 3\n"
                                "runs = 7\n"
                                "seed = 42\n"
                                "delta = 0.4\n"
                                "stretch = 2.5\n"
                                "qae = classical\n"
                                "output = /tmp/out.csv\n");
  SweepConfig cfg = parse_sweep_config(path);
  CHECK(cfg.distribution == "/data/ref.dist");
  CHECK(cfg.function == "square");
  REQUIRE(cfg.methods.size() == 2);
  CHECK(cfg.methods[0] == "classical");
  CHECK(cfg.methods[1] == "fourier");
  CHECK(cfg.budget_min == 100);
  CHECK(cfg.budget_max == 10000);
  CHECK(cfg.budget_points == 3);
  CHECK(cfg.runs == 7);
  CHECK(cfg.seed == 42);
  CHECK(cfg.delta == 0.4);
  CHECK(cfg.stretch == 2.5);
  CHECK(cfg.qae == "classical");
  CHECK(cfg.output == "/tmp/out.csv");

  auto expect_reject = [](const std::string& name, const std::string& body) {
    std::string p = write_text(name, body);
    CHECK_THROWS_AS(parse_sweep_config(p), std::invalid_argument);
  };
  const std::string base =
      "distribution = d\nmethods = classical\nbudget_min = 10\n"
      "budget_max = 100\nbudget_points = 3\nruns = 2\noutput = o.csv\n";
  expect_reject("unknown_key.cfg", base + "budgett = 3\n");
  expect_reject("dup_key.cfg", base + "runs = 4\n");
  expect_reject("bad_method.cfg",
                "distribution = d\nmethods = quantum\nbudget_min = 10\n"
                "budget_max = 100\nbudget_points = 3\nruns = 2\noutput = o.csv\n");
  expect_reject("dup_method.cfg",
                "distribution = d\nmethods = classical, classical\nbudget_min = 10\n"
                "budget_max = 100\nbudget_points = 3\nruns = 2\noutput = o.csv\n");
  expect_reject("bad_int.cfg",
                "distribution = d\nmethods = classical\nbudget_min = ten\n"
                "budget_max = 100\nbudget_points = 3\nruns = 2\noutput = o.csv\n");
  expect_reject("no_dist.cfg",
                "methods = classical\nbudget_min = 10\nbudget_max = 100\n"
                "budget_points = 3\nruns = 2\noutput = o.csv\n");
  expect_reject("no_eq.cfg", base + "stray line\n");
  CHECK_THROWS_AS(parse_sweep_config("/nonexistent/sweep.cfg"), std::runtime_error);
}

TEST_CASE("csv rendering") {
  std::vector<SweepRow> rows = {
      {"classical", 100, -1.125, 0.25, 100.0, 0},
      {"fourier", 1000, -1.17874900123, 0.0123456789012, 987.5, 16},
  };
  std::string csv = to_csv(rows);
  CHECK(csv ==
        "method,q,mean_estimate,rmse,queries_used,max_depth\n"
        "classical,100,-1.125,0.25,100,0\n"
        "fourier,1000,-1.178749001,0.0123456789,987.5,16\n");
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("sweep on a point mass gives zero error and no slope") {
  // All mass on x = 2 over a 4-point grid.
  std::string dist_path = write_text("delta.dist",
                                     "dimensions = 1\n"
                                     "x_l = 0\n"
                                     "delta = 1\n"
                                     "num_qubits = 2\n"
                                     "probs = 0 0 1 0\n");
  std::string csv_path = temp_file("delta_out.csv").string();
  SweepConfig cfg;
  cfg.distribution = dist_path;
  cfg.methods = {"classical"};
  cfg.budget_min = 10;
  cfg.budget_max = 1000;
  cfg.budget_points = 3;
  cfg.runs = 4;
  cfg.seed = 9;
  cfg.output = csv_path;

  SweepReport report = run_sweep(cfg);
  CHECK(report.oracle == 2.0);
  REQUIRE(report.rows.size() == 3);
  for (const auto& row : report.rows) {
    CHECK(row.mean_estimate == 2.0);
    CHECK(row.rmse == 0.0);
    CHECK(row.mean_queries == static_cast<double>(row.q));
  }
  REQUIRE(report.slopes.size() == 1);
  CHECK(std::isnan(report.slopes[0].second));

  std::string csv = read_text(csv_path);
  CHECK(csv.rfind("method,q,", 0) == 0);
  CHECK(csv.find("classical,10,2,0,10,0\n") != std::string::npos);
}

TEST_CASE("sweeps are reproducible for any thread count") {
  std::string csv_path = temp_file("repro_out.csv").string();
  SweepConfig cfg;
  cfg.distribution = test::data_path("reference16.dist");
  cfg.methods = {"classical", "rescaled", "fourier"};
  cfg.budget_min = 100;
  cfg.budget_max = 1000;
  cfg.budget_points = 2;
  cfg.runs = 5;
  cfg.seed = 77;
  cfg.output = csv_path;

  run_sweep(cfg, 1);
  std::string pass1 = read_text(csv_path);
  run_sweep(cfg, 1);
  std::string pass2 = read_text(csv_path);
  run_sweep(cfg, 2);
  std::string pass3 = read_text(csv_path);
  run_sweep(cfg, 0);  // one worker per hardware thread
  std::string pass4 = read_text(csv_path);

  CHECK(pass1 == pass2);
  CHECK(pass1 == pass3);
  CHECK(pass1 == pass4);
  CHECK(pass1.find('\r') == std::string::npos);

  // 3 methods x 2 budgets, in method-major order.
  SweepReport report = run_sweep(cfg, 1);
  REQUIRE(report.rows.size() == 6);
  CHECK(report.rows[0].method == "classical");
  CHECK(report.rows[2].method == "rescaled");
  CHECK(report.rows[4].method == "fourier");
  CHECK(report.oracle == doctest::Approx(-1.178749).epsilon(1e-9));
  for (const auto& row : report.rows) CHECK(row.rmse > 0.0);
}

TEST_CASE("sweep rejects a missing distribution file") {
  SweepConfig cfg;
  cfg.distribution = "/nonexistent/missing.dist";
  cfg.methods = {"classical"};
  cfg.budget_min = 10;
  cfg.budget_max = 100;
  cfg.budget_points = 3;
  cfg.runs = 1;
  cfg.output = temp_file("never.csv").string();
  CHECK_THROWS_AS(run_sweep(cfg), std::runtime_error);
}
