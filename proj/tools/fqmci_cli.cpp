#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fqmci/bench.hpp"
#include "fqmci/distribution.hpp"
#include "fqmci/estimators.hpp"

namespace {

void print_report(const fqmci::EstimateReport& rep, bool components) {
  std::printf("estimate        %.10g\n", rep.estimate);
  if (rep.true_value) {
    std::printf("oracle          %.10g\n", *rep.true_value);
    std::printf("error           %.10g\n", rep.estimate - *rep.true_value);
  }
  std::printf("queries_used    %lld\n", static_cast<long long>(rep.queries_total));
  std::printf("max_depth       %lld\n", static_cast<long long>(rep.max_depth));
  if (rep.n_max > 0) std::printf("n_max           %d\n", rep.n_max);
  if (components && !rep.components.empty()) {
    std::printf("components (kind n m weight value queries):\n");
    for (const auto& c : rep.components)
      std::printf("  %c %4d %4d  %+.6e  %+.6e  %lld\n", c.kind, c.n, c.m, c.weight,
                  c.value, static_cast<long long>(c.queries));
  }
}

std::vector<std::pair<double, double>> csv_points(const std::string& path,
                                                  const std::string& method,
                                                  bool use_requested_budget) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "method,q,mean_estimate,rmse,queries_used,max_depth")
    throw std::runtime_error("unrecognized CSV header in " + path);
  std::vector<std::pair<double, double>> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 6) throw std::runtime_error("malformed CSV row: " + line);
    if (fields[0] != method) continue;
    double x = std::stod(use_requested_budget ? fields[1] : fields[4]);
    pts.emplace_back(x, std::stod(fields[3]));
  }
  return pts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-decomposition quantum Monte-Carlo integration toolkit"};
  app.require_subcommand(1);

  // estimate
  std::string dist_path, function = "identity", function_g = "identity";
  std::string method = "fourier", qae = "mle";
  std::int64_t budget = 10000;
  int axis = 0, axis_j = 1;
  double delta = 0.5, stretch = 2.0;
  std::uint64_t seed = 1, stream = 0;
  bool show_components = false;

  auto* est = app.add_subcommand("estimate", "Run one estimate and print the report");
  est->add_option("--dist", dist_path, "distribution file")->required();
  est->add_option("--function", function, "integrand: identity|square|cube");
  est->add_option("--function-g", function_g, "second integrand (fourier-product)");
  est->add_option("--method", method,
                  "fourier|fourier-product|classical|rescaled");
  est->add_option("--budget", budget, "q (classical/rescaled) or q0 (fourier)");
  est->add_option("--axis", axis, "axis of the first integrand");
  est->add_option("--axis-j", axis_j, "axis of the second integrand");
  est->add_option("--qae", qae, "amplitude estimation: classical|mle|exact");
  est->add_option("--delta", delta, "harmonic budget exponent offset, in (0,1)");
  est->add_option("--stretch", stretch, "period / support width, > 1");
  est->add_option("--seed", seed, "rng seed");
  est->add_option("--stream", stream, "rng stream id");
  est->add_flag("--components", show_components, "print per-component table");

  // sweep
  std::string config_path;
  int threads = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a benchmark sweep from a config file");
  sweep->add_option("--config", config_path, "sweep config file")->required();
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)");

  // slope
  std::string csv_path, slope_method;
  bool use_q = false;
  auto* slope = app.add_subcommand("slope", "Fit a log-log rmse slope from a sweep CSV");
  slope->add_option("--csv", csv_path, "sweep CSV")->required();
  slope->add_option("--method", slope_method, "method column to fit")->required();
  slope->add_flag("--requested-budget", use_q,
                  "fit against the q column instead of queries_used");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Print the exact expectation");
  oracle->add_option("--dist", dist_path, "distribution file")->required();
  oracle->add_option("--function", function, "integrand: identity|square|cube");
  oracle->add_option("--function-g", function_g, "second integrand (with --axis-j)");
  oracle->add_option("--axis", axis, "axis of the first integrand");
  oracle->add_option("--axis-j", axis_j, "second axis; enables the product oracle");
  bool product = false;
  oracle->add_flag("--product", product, "compute E[f(X_i) g(X_j)]");

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed()) {
      auto dist = fqmci::load_distribution(dist_path);
      fqmci::ShotSampler rng(seed, stream);
      fqmci::EstimateReport rep;
      if (method == "fourier") {
        fqmci::FourierOptions opt{static_cast<double>(budget), qae, delta, stretch};
        rep = fqmci::fourier_qmci(dist, axis, fqmci::parse_function(function), opt, rng);
      } else if (method == "fourier-product") {
        fqmci::FourierOptions opt{static_cast<double>(budget), qae, delta, stretch};
        rep = fqmci::fourier_qmci_product(dist, axis, axis_j,
                                          fqmci::parse_function(function),
                                          fqmci::parse_function(function_g), opt, rng);
      } else if (method == "classical") {
        rep = fqmci::classical_mci(dist, axis, fqmci::parse_function(function), budget,
                                   rng);
      } else if (method == "rescaled") {
        rep = fqmci::rescaled_qmci(dist, axis, budget, qae, rng);
      } else {
        std::fprintf(stderr, "unknown method '%s'\n", method.c_str());
        return 2;
      }
      print_report(rep, show_components);
    } else if (sweep->parsed()) {
      auto cfg = fqmci::parse_sweep_config(config_path);
      auto report = fqmci::run_sweep(cfg, threads);
      std::printf("wrote %s (%zu rows), oracle %.10g\n", report.csv_path.c_str(),
                  report.rows.size(), report.oracle);
      for (const auto& [m, s] : report.slopes)
        std::printf("slope %-10s %.4f\n", m.c_str(), s);
      for (std::size_t i = 0; i < cfg.methods.size(); ++i)
        for (std::size_t j = 0; j < cfg.methods.size(); ++j) {
          if (i == j) continue;
          auto cross = fqmci::find_crossover(report, cfg.methods[i], cfg.methods[j]);
          if (cross.found)
            std::printf("crossover %s < %s at %.6g queries (depth %lld)%s\n",
                        cfg.methods[i].c_str(), cfg.methods[j].c_str(), cross.queries,
                        static_cast<long long>(cross.depth_at),
                        cross.degenerate ? " [degenerate]" : "");
        }
    } else if (slope->parsed()) {
      auto pts = csv_points(csv_path, slope_method, use_q);
      std::printf("slope %.6f\n", fqmci::fit_slope(pts));
    } else if (oracle->parsed()) {
      auto dist = fqmci::load_distribution(dist_path);
      auto f = fqmci::parse_function(function);
      double value;
      if (product) {
        auto g = fqmci::parse_function(function_g);
        value = fqmci::brute_force_expectation(
            dist, {axis, axis_j},
            {[&](double x) { return f.eval(x); }, [&](double y) { return g.eval(y); }});
      } else {
        value = fqmci::brute_force_expectation(dist, {axis},
                                               {[&](double x) { return f.eval(x); }});
      }
      std::printf("%.12g\n", value);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
