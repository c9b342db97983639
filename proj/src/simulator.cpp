#include "fqmci/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace fqmci {
namespace {

void apply_gate(const Gate& g, Eigen::VectorXcd& state, int width, bool inverted);

void apply_ry(int target, double angle, Eigen::VectorXcd& state) {
  const std::int64_t bit = std::int64_t{1} << target;
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  for (std::int64_t base = 0; base < state.size(); base += bit << 1) {
    for (std::int64_t off = 0; off < bit; ++off) {
      std::int64_t i0 = base + off, i1 = i0 + bit;
      auto v0 = state[i0], v1 = state[i1];
      state[i0] = c * v0 - s * v1;
      state[i1] = s * v0 + c * v1;
    }
  }
}

void apply_cry(int control, int target, double angle, Eigen::VectorXcd& state) {
  const std::int64_t cbit = std::int64_t{1} << control;
  const std::int64_t tbit = std::int64_t{1} << target;
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  for (std::int64_t base = 0; base < state.size(); base += tbit << 1) {
    for (std::int64_t off = 0; off < tbit; ++off) {
      std::int64_t i0 = base + off;
      if (!(i0 & cbit)) continue;
      std::int64_t i1 = i0 + tbit;
      auto v0 = state[i0], v1 = state[i1];
      state[i0] = c * v0 - s * v1;
      state[i1] = s * v0 + c * v1;
    }
  }
}

// Householder reflection taking |0...0> of the low `span` qubits to the target
// amplitude vector; real, symmetric, hence self-inverse.
void apply_state_prep(const Gate& g, Eigen::VectorXcd& state) {
  const std::int64_t dim = g.amplitudes.size();
  if (dim != (std::int64_t{1} << g.span))
    throw std::invalid_argument("state_prep: amplitude vector is not 2^span long");

  Eigen::VectorXd w = g.amplitudes;
  double norm = w.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("state_prep: zero amplitude vector");
  w /= norm;

  Eigen::VectorXd u = -w;
  u[0] += 1.0;
  double unorm = u.norm();
  if (unorm < 1e-12) return;  // already |0...0>
  u /= unorm;

  for (std::int64_t block = 0; block < state.size(); block += dim) {
    auto seg = state.segment(block, dim);
    std::complex<double> dot(0.0, 0.0);
    for (std::int64_t i = 0; i < dim; ++i) dot += u[i] * seg[i];
    for (std::int64_t i = 0; i < dim; ++i) seg[i] -= 2.0 * dot * u[i];
  }
}

void apply_phase_flip(int target, Eigen::VectorXcd& state) {
  const std::int64_t bit = std::int64_t{1} << target;
  for (std::int64_t i = 0; i < state.size(); ++i)
    if (i & bit) state[i] = -state[i];
}

void apply_reflect_zero(int span, Eigen::VectorXcd& state) {
  const std::int64_t mask = (std::int64_t{1} << span) - 1;
  for (std::int64_t i = 0; i < state.size(); ++i)
    if (i & mask) state[i] = -state[i];
}

void apply_gates(const std::vector<Gate>& gates, Eigen::VectorXcd& state, int width,
                 bool inverted) {
  if (!inverted) {
    for (const auto& g : gates) apply_gate(g, state, width, false);
  } else {
    for (auto it = gates.rbegin(); it != gates.rend(); ++it)
      apply_gate(*it, state, width, true);
  }
}

void apply_gate(const Gate& g, Eigen::VectorXcd& state, int width, bool inverted) {
  auto check_qubit = [&](int q, const char* what) {
    if (q < 0 || q >= width)
      throw std::invalid_argument(std::string("simulator: ") + what + " out of range");
  };
  switch (g.kind) {
    case Gate::Kind::StatePrep:
      if (g.span < 1 || g.span > width)
        throw std::invalid_argument("simulator: state_prep span out of range");
      apply_state_prep(g, state);  // self-inverse
      break;
    case Gate::Kind::Ry:
      check_qubit(g.target, "ry target");
      apply_ry(g.target, inverted ? -g.angle : g.angle, state);
      break;
    case Gate::Kind::CRy:
      check_qubit(g.target, "cry target");
      check_qubit(g.control, "cry control");
      if (g.control == g.target)
        throw std::invalid_argument("simulator: cry control equals target");
      apply_cry(g.control, g.target, inverted ? -g.angle : g.angle, state);
      break;
    case Gate::Kind::PhaseFlip:
      check_qubit(g.target, "phase_flip target");
      apply_phase_flip(g.target, state);
      break;
    case Gate::Kind::ReflectZero:
      if (g.span < 1 || g.span > width)
        throw std::invalid_argument("simulator: reflect_zero span out of range");
      apply_reflect_zero(g.span, state);
      break;
    case Gate::Kind::Inverse:
      apply_gates(g.body, state, width, !inverted);
      break;
  }
}

}  // namespace

void apply_circuit(const Circuit& c, Eigen::VectorXcd& state) {
  if (c.width < 1 || c.width > kMaxSimQubits)
    throw std::invalid_argument("simulator: circuit width out of [1, " +
                                std::to_string(kMaxSimQubits) + "]");
  if (state.size() != (std::int64_t{1} << c.width))
    throw std::invalid_argument("simulator: state dimension does not match width");
  apply_gates(c.gates, state, c.width, false);
}

Eigen::VectorXcd run(const Circuit& c) {
  if (c.width < 1 || c.width > kMaxSimQubits)
    throw std::invalid_argument("simulator: circuit width out of [1, " +
                                std::to_string(kMaxSimQubits) + "]");
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(std::int64_t{1} << c.width);
  state[0] = 1.0;
  apply_gates(c.gates, state, c.width, false);
  return state;
}

double good_state_probability(const Circuit& c) {
  if (c.ancilla < 0)
    throw std::invalid_argument("simulator: circuit has no ancilla to measure");
  Eigen::VectorXcd state = run(c);
  const std::int64_t bit = std::int64_t{1} << c.ancilla;
  double p = 0.0;
  for (std::int64_t i = 0; i < state.size(); ++i)
    if (i & bit) p += std::norm(state[i]);
  return p;
}

double amplitude_angle(const Circuit& c) {
  double p = good_state_probability(c);
  p = std::min(1.0, std::max(0.0, p));
  return std::asin(std::sqrt(p));
}

std::int64_t sample_grover_shots(double theta, std::int64_t m, std::int64_t shots,
                                 ShotSampler& rng) {
  if (m < 0) throw std::invalid_argument("sample_grover_shots: m must be >= 0");
  if (shots < 0) throw std::invalid_argument("sample_grover_shots: shots must be >= 0");
  if (!std::isfinite(theta))
    throw std::invalid_argument("sample_grover_shots: theta not finite");
  double s = std::sin(static_cast<double>(2 * m + 1) * theta);
  return binomial_draw(rng, shots, s * s);
}

}  // namespace fqmci
