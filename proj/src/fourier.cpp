#include "fqmci/fourier.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace fqmci {

double PeriodicExtension::eval(double x) const {
  double u = std::fmod(x - x_l, period);
  if (u < 0.0) u += period;
  double xr = x_l + u;
  return xr <= x_u ? base.eval(xr) : bridge.eval(xr);
}

double PeriodicExtension::deriv(double x) const {
  double u = std::fmod(x - x_l, period);
  if (u < 0.0) u += period;
  double xr = x_l + u;
  return xr <= x_u ? base.deriv(xr) : bridge.deriv(xr);
}

PeriodicExtension extend_periodic(const FunctionSpec& f, double x_l, double x_u,
                                  double stretch) {
  if (!(x_u > x_l)) throw std::invalid_argument("extend_periodic: x_u must exceed x_l");
  if (!(stretch > 1.0))
    throw std::invalid_argument("extend_periodic: stretch must exceed 1");
  f.validate_smooth(x_l, x_u);

  const double period = stretch * (x_u - x_l);
  const double x_e = x_l + period;
  const double gap = x_e - x_u;

  // Cubic Hermite bridge over the gap [x_u, x_e], matching value and slope at
  // both ends so the wrapped extension stays C^1.  In the normalized variable
  // t = (x - x_u) / gap the coefficients have a closed form.
  const double v0 = f.eval(x_u), v1 = f.eval(x_l);
  const double d0 = gap * f.deriv(x_u), d1 = gap * f.deriv(x_l);
  const double c[4] = {v0, d0, 3.0 * (v1 - v0) - 2.0 * d0 - d1,
                       2.0 * (v0 - v1) + d0 + d1};

  // Expand sum_k c_k t^k into ascending powers of x.  The shift by x_u can
  // cancel badly when the gap is narrow next to |x_u|, so accumulate in
  // extended precision.
  static constexpr double binom[4][4] = {
      {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  Eigen::Vector4d coeffs = Eigen::Vector4d::Zero();
  for (int j = 0; j < 4; ++j) {
    long double acc = 0.0L;
    for (int k = j; k < 4; ++k) {
      long double term = static_cast<long double>(c[k]) * binom[k][j];
      for (int i = 0; i < k; ++i) term /= gap;
      for (int i = 0; i < k - j; ++i) term *= -static_cast<long double>(x_u);
      acc += term;
    }
    coeffs[j] = static_cast<double>(acc);
  }
  if (!coeffs.allFinite())
    throw std::runtime_error("extend_periodic: bridge solve failed");

  return PeriodicExtension{f,      x_l,    x_u, PolynomialPiece{x_u, x_e, coeffs},
                           period, 2.0 * std::numbers::pi / period};
}

double FourierSeries::eval_partial(double x, int terms) const {
  if (terms < 0 || terms > n_terms())
    throw std::invalid_argument("eval_partial: term count out of range");
  double acc = dc;
  for (int n = 1; n <= terms; ++n)
    acc += cos_coeffs[n - 1] * std::cos(n * omega * x) +
           sin_coeffs[n - 1] * std::sin(n * omega * x);
  return acc;
}

namespace {

constexpr double kZeroSnap = 1e-14;

double snap(double v) { return std::abs(v) < kZeroSnap ? 0.0 : v; }

// Antiderivative of p(x) e^{-iwx} evaluated by repeated differentiation:
// integral = e^{-iwx} * sum_j (-1)^j p^(j)(x) / (-iw)^(j+1).
std::complex<double> piece_phase_integral(const PolynomialPiece& p, double w) {
  using cd = std::complex<double>;
  const cd miw(0.0, -w);
  auto antideriv = [&](double x) {
    cd acc(0.0, 0.0);
    PolynomialPiece d = p;
    cd denom = miw;
    double sign = 1.0;
    for (;;) {
      acc += sign * d.eval(x) / denom;
      if (d.coeffs.size() <= 1) break;
      d = d.derivative();
      denom *= miw;
      sign = -sign;
    }
    return acc;
  };
  return std::exp(cd(0.0, -w * p.hi)) * antideriv(p.hi) -
         std::exp(cd(0.0, -w * p.lo)) * antideriv(p.lo);
}

double piece_plain_integral(const PolynomialPiece& p) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < p.coeffs.size(); ++k) {
    double kk = static_cast<double>(k) + 1.0;
    acc += p.coeffs[k] * (std::pow(p.hi, kk) - std::pow(p.lo, kk)) / kk;
  }
  return acc;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double fa,
                        double b, double fb, double m, double fm, double whole,
                        double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("quadrature failed to converge");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int min_panels, double tol) {
  double acc = 0.0;
  double h = (b - a) / min_panels;
  for (int i = 0; i < min_panels; ++i) {
    double lo = a + i * h, hi = a + (i + 1) * h, mid = 0.5 * (lo + hi);
    double flo = f(lo), fhi = f(hi), fmid = f(mid);
    double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    acc += adaptive_simpson(f, lo, flo, hi, fhi, mid, fmid, whole, tol / min_panels, 48);
  }
  return acc;
}

}  // namespace

FourierSeries fourier_series_of_pieces(const std::vector<PolynomialPiece>& pieces,
                                       double x0, double period, int n_max) {
  if (n_max < 0) throw std::invalid_argument("fourier series: n_max must be >= 0");
  if (!(period > 0.0)) throw std::invalid_argument("fourier series: bad period");
  if (pieces.empty()) throw std::invalid_argument("fourier series: no pieces");
  double covered = x0;
  for (const auto& p : pieces) {
    if (std::abs(p.lo - covered) > 1e-9)
      throw std::invalid_argument("fourier series: pieces do not tile the cycle");
    covered = p.hi;
  }
  if (std::abs(covered - (x0 + period)) > 1e-9)
    throw std::invalid_argument("fourier series: pieces do not tile the cycle");

  FourierSeries s;
  s.period = period;
  s.omega = 2.0 * std::numbers::pi / period;
  s.cos_coeffs = Eigen::VectorXd::Zero(n_max);
  s.sin_coeffs = Eigen::VectorXd::Zero(n_max);

  double dc = 0.0;
  for (const auto& p : pieces) dc += piece_plain_integral(p);
  s.dc = snap(dc / period);

  for (int n = 1; n <= n_max; ++n) {
    std::complex<double> c(0.0, 0.0);
    for (const auto& p : pieces) c += piece_phase_integral(p, n * s.omega);
    c /= period;
    s.cos_coeffs[n - 1] = snap(2.0 * c.real());
    s.sin_coeffs[n - 1] = snap(-2.0 * c.imag());
  }
  return s;
}

FourierSeries fourier_coefficients(const PeriodicExtension& ext, int n_max) {
  if (ext.base.is_piecewise()) {
    auto pieces = ext.base.pieces_on(ext.x_l, ext.x_u);
    pieces.push_back(ext.bridge);
    return fourier_series_of_pieces(pieces, ext.x_l, ext.period, n_max);
  }

  // Black-box path: adaptive quadrature against each harmonic.
  if (n_max < 0) throw std::invalid_argument("fourier series: n_max must be >= 0");
  FourierSeries s;
  s.period = ext.period;
  s.omega = ext.omega;
  s.numeric = true;
  s.cos_coeffs = Eigen::VectorXd::Zero(n_max);
  s.sin_coeffs = Eigen::VectorXd::Zero(n_max);
  const double a = ext.x_l, b = ext.x_l + ext.period;
  const double tol = 1e-12 * ext.period;

  s.dc = snap(integrate([&](double x) { return ext.eval(x); }, a, b, 8, tol) /
              ext.period);
  for (int n = 1; n <= n_max; ++n) {
    double w = n * ext.omega;
    int panels = std::max(8, 4 * n);
    double ca = integrate([&](double x) { return ext.eval(x) * std::cos(w * x); }, a, b,
                          panels, tol);
    double cb = integrate([&](double x) { return ext.eval(x) * std::sin(w * x); }, a, b,
                          panels, tol);
    s.cos_coeffs[n - 1] = snap(2.0 * ca / ext.period);
    s.sin_coeffs[n - 1] = snap(2.0 * cb / ext.period);
  }
  return s;
}

DecayCheck verify_decay(const FourierSeries& series) {
  const int n = series.n_terms();
  if (n < 8) throw std::invalid_argument("verify_decay: need at least 8 harmonics");

  auto envelope = [&](int k) {
    double mag = std::max(std::abs(series.cos_coeffs[k - 1]),
                          std::abs(series.sin_coeffs[k - 1]));
    return static_cast<double>(k) * k * k * mag;
  };

  DecayCheck check;
  for (int k = 1; k <= n; ++k) {
    double e = envelope(k);
    if (e > check.k_envelope) {
      check.k_envelope = e;
      check.worst_n = k;
    }
  }

  const int half = n / 2;
  double first = 0.0, second = 0.0;
  int second_peak = half + 1;
  for (int k = 1; k <= half; ++k) first = std::max(first, envelope(k));
  for (int k = half + 1; k <= n; ++k) {
    double e = envelope(k);
    if (e > second) {
      second = e;
      second_peak = k;
    }
  }
  if (second > std::max(2.0 * first, 1e-13))
    throw DecayViolation("coefficients are not decaying cubically: n^3-scaled "
                         "magnitude at n = " +
                             std::to_string(second_peak) + " is " +
                             std::to_string(second) + " vs first-half peak " +
                             std::to_string(first),
                         second_peak);
  return check;
}

}  // namespace fqmci
