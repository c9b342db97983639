#include "fqmci/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fqmci/circuit.hpp"
#include "fqmci/simulator.hpp"

namespace fqmci {
namespace {

// Ceiling with a relative guard so values that are integers up to rounding
// error do not get bumped a whole step.
std::int64_t guarded_ceil(double v) {
  return static_cast<std::int64_t>(std::ceil(v - 1e-9 - 1e-12 * std::abs(v)));
}

void check_options(const FourierOptions& opt) {
  if (!(opt.q0 >= 1.0)) throw std::invalid_argument("estimator: q0 must be >= 1");
  if (!(opt.delta > 0.0 && opt.delta < 1.0))
    throw std::invalid_argument("estimator: delta must lie in (0, 1)");
  if (!(opt.stretch > 1.0))
    throw std::invalid_argument("estimator: stretch must exceed 1");
  qae_lambda(opt.qae);  // validates the name
}

double oracle_univariate(const DiscreteDistribution& dist, int axis,
                         const FunctionSpec& f) {
  return brute_force_expectation(dist, {axis}, {[&](double x) { return f.eval(x); }});
}

EstimatePlan::Job make_job(const Circuit& circuit, double weight, std::int64_t budget,
                           int n, int m, char kind) {
  EstimatePlan::Job job;
  job.theta = amplitude_angle(circuit);
  job.weight = weight;
  job.budget = budget;
  job.n = n;
  job.m = m;
  job.kind = kind;
  return job;
}

}  // namespace

AllocationPlan plan_allocation(double q0, double lambda, double delta) {
  if (!(q0 >= 1.0)) throw std::invalid_argument("plan_allocation: q0 must be >= 1");
  if (!(lambda >= 1.0 && lambda <= 2.0))
    throw std::invalid_argument("plan_allocation: lambda must lie in [1, 2]");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("plan_allocation: delta must lie in (0, 1)");

  AllocationPlan plan;
  plan.kappa = 2.0 - delta;
  plan.n_max = static_cast<int>(guarded_ceil(std::pow(q0, lambda / 4.0)));
  plan.q_n.resize(plan.n_max);
  for (int n = 1; n <= plan.n_max; ++n)
    plan.q_n[n - 1] = guarded_ceil(q0 * std::pow(static_cast<double>(n), -plan.kappa));
  plan.declared_bound = 2.0 * q0 * std::riemann_zeta(plan.kappa) + 2.0 * plan.n_max;
  return plan;
}

EstimatePlan build_fourier_plan(const DiscreteDistribution& dist, int axis,
                                const FunctionSpec& f, const FourierOptions& opt) {
  check_options(opt);
  const GridSupport& ax = dist.axis(axis);

  PeriodicExtension ext = extend_periodic(f, ax.x_l, ax.x_u(), opt.stretch);
  AllocationPlan alloc = plan_allocation(opt.q0, qae_lambda(opt.qae), opt.delta);
  FourierSeries series = fourier_coefficients(ext, alloc.n_max);
  Circuit prep = build_state_prep(dist);

  EstimatePlan plan;
  plan.constant = series.dc;
  plan.true_value = oracle_univariate(dist, axis, f);
  plan.n_max = alloc.n_max;
  plan.declared_bound = alloc.declared_bound;
  plan.qae = opt.qae;

  constexpr double half_pi = std::numbers::pi / 2.0;
  for (int n = 1; n <= alloc.n_max; ++n) {
    // Components with exactly-zero coefficients get no circuit and no budget.
    if (double a = series.a(n); a != 0.0)
      plan.jobs.push_back(make_job(build_A(prep, dist, axis, 0.0, n, series.omega), a,
                                   alloc.q_n[n - 1], n, 0, 'a'));
    if (double b = series.b(n); b != 0.0)
      plan.jobs.push_back(make_job(build_A(prep, dist, axis, half_pi, n, series.omega),
                                   b, alloc.q_n[n - 1], n, 0, 'b'));
  }
  return plan;
}

EstimatePlan build_product_plan(const DiscreteDistribution& dist, int axis_i,
                                int axis_j, const FunctionSpec& f,
                                const FunctionSpec& g, const FourierOptions& opt) {
  check_options(opt);
  if (axis_i == axis_j)
    throw std::invalid_argument("product estimator: axes must be distinct");
  const GridSupport& ax_i = dist.axis(axis_i);
  const GridSupport& ax_j = dist.axis(axis_j);

  PeriodicExtension ext_f = extend_periodic(f, ax_i.x_l, ax_i.x_u(), opt.stretch);
  PeriodicExtension ext_g = extend_periodic(g, ax_j.x_l, ax_j.x_u(), opt.stretch);
  AllocationPlan alloc = plan_allocation(opt.q0, qae_lambda(opt.qae), opt.delta);
  FourierSeries sf = fourier_coefficients(ext_f, alloc.n_max);
  FourierSeries sg = fourier_coefficients(ext_g, alloc.n_max);
  Circuit prep = build_state_prep(dist);

  const double w1 = sf.omega, w2 = sg.omega;
  const double c1 = sf.dc, c2 = sg.dc;
  constexpr double half_pi = std::numbers::pi / 2.0;

  EstimatePlan plan;
  plan.constant = c1 * c2;
  plan.true_value = brute_force_expectation(
      dist, {axis_i, axis_j},
      {[&](double x) { return f.eval(x); }, [&](double y) { return g.eval(y); }});
  plan.n_max = alloc.n_max;
  plan.qae = opt.qae;

  // Single-series cross terms, each on its own axis with the univariate split.
  if (c2 != 0.0) {
    for (int n = 1; n <= alloc.n_max; ++n) {
      if (double a = sf.a(n); a != 0.0)
        plan.jobs.push_back(make_job(build_A(prep, dist, axis_i, 0.0, n, w1), c2 * a,
                                     alloc.q_n[n - 1], n, 0, 'f'));
      if (double b = sf.b(n); b != 0.0)
        plan.jobs.push_back(make_job(build_A(prep, dist, axis_i, half_pi, n, w1),
                                     c2 * b, alloc.q_n[n - 1], n, 0, 'f'));
    }
  }
  if (c1 != 0.0) {
    for (int m = 1; m <= alloc.n_max; ++m) {
      if (double a = sg.a(m); a != 0.0)
        plan.jobs.push_back(make_job(build_A(prep, dist, axis_j, 0.0, m, w2), c1 * a,
                                     alloc.q_n[m - 1], 0, m, 'g'));
      if (double b = sg.b(m); b != 0.0)
        plan.jobs.push_back(make_job(build_A(prep, dist, axis_j, half_pi, m, w2),
                                     c1 * b, alloc.q_n[m - 1], 0, m, 'g'));
    }
  }

  // Bilinear terms. Product-to-sum turns (a_n cos + b_n sin)(a_m cos + b_m sin)
  // into four phase sums; the difference phases come from running the second
  // harmonic negated.
  for (int n = 1; n <= alloc.n_max; ++n) {
    double afn = sf.a(n), bfn = sf.b(n);
    if (afn == 0.0 && bfn == 0.0) continue;
    for (int m = 1; m <= alloc.n_max; ++m) {
      double agm = sg.a(m), bgm = sg.b(m);
      if (agm == 0.0 && bgm == 0.0) continue;

      std::int64_t q_nm = guarded_ceil(
          opt.q0 * std::pow(static_cast<double>(n) * m, -alloc.kappa));

      double wa = 0.5 * (afn * agm + bfn * bgm);  // cos(n w1 x - m w2 y)
      double wb = 0.5 * (afn * agm - bfn * bgm);  // cos(n w1 x + m w2 y)
      double wc = 0.5 * (afn * bgm + bfn * agm);  // sin(n w1 x + m w2 y)
      double wd = 0.5 * (bfn * agm - afn * bgm);  // sin(n w1 x - m w2 y)

      if (wa != 0.0)
        plan.jobs.push_back(make_job(
            build_A_bivariate(prep, dist, axis_i, axis_j, 0.0, n, -m, w1, w2), wa,
            q_nm, n, m, 'a'));
      if (wb != 0.0)
        plan.jobs.push_back(make_job(
            build_A_bivariate(prep, dist, axis_i, axis_j, 0.0, n, m, w1, w2), wb,
            q_nm, n, m, 'b'));
      if (wc != 0.0)
        plan.jobs.push_back(make_job(
            build_A_bivariate(prep, dist, axis_i, axis_j, half_pi, n, m, w1, w2), wc,
            q_nm, n, m, 'c'));
      if (wd != 0.0)
        plan.jobs.push_back(make_job(
            build_A_bivariate(prep, dist, axis_i, axis_j, half_pi, n, -m, w1, w2), wd,
            q_nm, n, m, 'd'));
    }
  }

  double zeta = std::riemann_zeta(alloc.kappa);
  double nmax = static_cast<double>(alloc.n_max);
  plan.declared_bound = 4.0 * (opt.q0 * zeta * zeta + nmax * nmax) +
                        (c2 != 0.0 ? 2.0 * opt.q0 * zeta + 2.0 * nmax : 0.0) +
                        (c1 != 0.0 ? 2.0 * opt.q0 * zeta + 2.0 * nmax : 0.0);
  return plan;
}

EstimateReport execute_plan(const EstimatePlan& plan, ShotSampler& rng) {
  EstimateReport rep;
  rep.estimate = plan.constant;
  rep.true_value = plan.true_value;
  rep.n_max = plan.n_max;
  rep.declared_budget_bound = plan.declared_bound;
  rep.components.reserve(plan.jobs.size());

  for (std::size_t j = 0; j < plan.jobs.size(); ++j) {
    const auto& job = plan.jobs[j];
    ShotSampler sub = rng.derive(j);
    QaeResult r = run_qae(plan.qae, job.theta, QaeBudget{job.budget}, sub);
    double s_hat = std::clamp(r.estimate, 0.0, 1.0);
    double value = 1.0 - 2.0 * s_hat;
    rep.estimate += job.weight * value;
    rep.queries_total += r.queries_used;
    rep.max_depth = std::max(rep.max_depth, r.max_sequential_grover);
    rep.components.push_back(
        {job.n, job.m, job.kind, job.weight, s_hat, value, r.queries_used});
  }
  return rep;
}

EstimateReport fourier_qmci(const DiscreteDistribution& dist, int axis,
                            const FunctionSpec& f, const FourierOptions& opt,
                            ShotSampler& rng) {
  return execute_plan(build_fourier_plan(dist, axis, f, opt), rng);
}

EstimateReport fourier_qmci_product(const DiscreteDistribution& dist, int axis_i,
                                    int axis_j, const FunctionSpec& f,
                                    const FunctionSpec& g, const FourierOptions& opt,
                                    ShotSampler& rng) {
  return execute_plan(build_product_plan(dist, axis_i, axis_j, f, g, opt), rng);
}

EstimateReport classical_mci(const DiscreteDistribution& dist, int axis,
                             const FunctionSpec& f, std::int64_t q, ShotSampler& rng) {
  if (q < 1) throw std::invalid_argument("classical_mci: q must be >= 1");
  DiscreteDistribution marg = dist.dimensions() == 1 && axis == 0
                                  ? dist
                                  : marginal(dist, axis);
  const GridSupport& ax = marg.axis(0);

  std::vector<double> cdf(static_cast<std::size_t>(marg.flat_size()));
  double acc = 0.0;
  for (std::int64_t i = 0; i < marg.flat_size(); ++i) {
    acc += marg.probs()[i];
    cdf[static_cast<std::size_t>(i)] = acc;
  }

  double sum = 0.0;
  for (std::int64_t k = 0; k < q; ++k) {
    double u = rng.next_double();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::int64_t idx = std::min<std::int64_t>(it - cdf.begin(), marg.flat_size() - 1);
    sum += f.eval(ax.point(idx));
  }

  EstimateReport rep;
  rep.estimate = sum / static_cast<double>(q);
  rep.true_value = oracle_univariate(dist, axis, f);
  rep.queries_total = q;
  rep.max_depth = 0;
  rep.declared_budget_bound = static_cast<double>(q);
  return rep;
}

EstimateReport rescaled_qmci(const DiscreteDistribution& dist, int axis,
                             std::int64_t q, const std::string& qae,
                             ShotSampler& rng, double scale) {
  if (q < 1) throw std::invalid_argument("rescaled_qmci: q must be >= 1");
  if (scale < 0.0 || scale > 1.0)
    throw std::invalid_argument("rescaled_qmci: scale must lie in (0, 1]");
  const GridSupport& ax = dist.axis(axis);
  const double width = ax.width();

  const double c = scale > 0.0 ? scale
                               : std::pow(static_cast<double>(q), -1.0 / 3.0);

  // Rotation angle c(x~ - 1/2) + pi/4 for x~ = (x - x_l)/width, encoded as a
  // single first-harmonic rotation bank.
  const double omega = 2.0 * c / width;
  const double beta = omega * ax.x_l + c - std::numbers::pi / 2.0;
  Circuit prep = build_state_prep(dist);
  Circuit a = build_A(prep, dist, axis, beta, 1, omega);
  double theta = amplitude_angle(a);

  QaeResult r = run_qae(qae, theta, QaeBudget{q}, rng);
  double a_hat = std::clamp(r.estimate, 0.0, 1.0);
  double x_tilde = (a_hat - 0.5) / c + 0.5;

  EstimateReport rep;
  rep.estimate = ax.x_l + width * x_tilde;
  rep.true_value = brute_force_expectation(dist, {axis}, {[](double x) { return x; }});
  rep.queries_total = r.queries_used;
  rep.max_depth = r.max_sequential_grover;
  rep.declared_budget_bound = static_cast<double>(q);
  rep.components.push_back({1, 0, 'r', width / (2.0 * c), a_hat, 1.0 - 2.0 * a_hat,
                            r.queries_used});
  return rep;
}

}  // namespace fqmci
