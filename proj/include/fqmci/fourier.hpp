#pragma once

#include <Eigen/Core>
#include <stdexcept>

#include "fqmci/function_spec.hpp"

namespace fqmci {

// Periodic surrogate f-bar: equals f on [x_l, x_u], returns to f(x_l) with
// matched value and slope along a cubic bridge on [x_u, x_l + period], then
// repeats with period = stretch * (x_u - x_l). C^1 by construction, so its
// Fourier coefficients decay cubically.
struct PeriodicExtension {
  FunctionSpec base;
  double x_l = 0.0;
  double x_u = 0.0;
  PolynomialPiece bridge;  // on [x_u, x_l + period]
  double period = 0.0;
  double omega = 0.0;  // 2*pi / period

  double eval(double x) const;
  double deriv(double x) const;
};

// Requires stretch > 1 and x_u > x_l; validates smoothness of f on [x_l, x_u].
PeriodicExtension extend_periodic(const FunctionSpec& f, double x_l, double x_u,
                                  double stretch);

// f-bar(x) ~= dc + sum_n a_n cos(n w x) + b_n sin(n w x), phases in absolute x.
struct FourierSeries {
  double dc = 0.0;
  Eigen::VectorXd cos_coeffs;  // a_1 .. a_{n}
  Eigen::VectorXd sin_coeffs;  // b_1 .. b_{n}
  double omega = 0.0;
  double period = 0.0;
  bool numeric = false;  // true when the coefficients came from quadrature

  int n_terms() const { return static_cast<int>(cos_coeffs.size()); }
  double a(int n) const { return cos_coeffs[n - 1]; }
  double b(int n) const { return sin_coeffs[n - 1]; }
  double eval_partial(double x, int terms) const;
};

// Closed form for piecewise-polynomial extensions, adaptive quadrature
// (absolute tolerance 1e-12) otherwise. Magnitudes below 1e-14 are stored as
// exact zeros so downstream consumers can skip dead components.
FourierSeries fourier_coefficients(const PeriodicExtension& ext, int n_max);

// Shared kernel: series of an explicit periodic piecewise-polynomial cycle
// starting at x0 with the given period. Pieces must tile [x0, x0 + period).
FourierSeries fourier_series_of_pieces(const std::vector<PolynomialPiece>& pieces,
                                       double x0, double period, int n_max);

class DecayViolation : public std::runtime_error {
 public:
  DecayViolation(const std::string& what, int worst_n)
      : std::runtime_error(what), worst_n(worst_n) {}
  int worst_n;
};

struct DecayCheck {
  double k_envelope = 0.0;  // max_n n^3 * max(|a_n|, |b_n|)
  int worst_n = 0;          // where the envelope peaks
};

// Verifies the cubic-decay envelope: the peak of n^3*max(|a_n|,|b_n|) over the
// second half of the harmonic range must not exceed twice the first-half peak.
// Needs at least 8 terms; throws DecayViolation naming the offending harmonic.
DecayCheck verify_decay(const FourierSeries& series);

}  // namespace fqmci
