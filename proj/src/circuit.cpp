#include "fqmci/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fqmci {
namespace {

// Qubit offset of an axis register; axis 0 sits on the lowest qubits.
int axis_offset(const DiscreteDistribution& dist, int axis) {
  int off = 0;
  for (int j = 0; j < axis; ++j) off += dist.axis(j).num_qubits;
  return off;
}

void check_prep(const Circuit& prep, const DiscreteDistribution& dist) {
  if (prep.width != dist.total_qubits())
    throw std::invalid_argument("rotation bank: prep width does not match the "
                                "distribution register");
}

void append_axis_rotations(Circuit& c, const DiscreteDistribution& dist, int axis,
                           double harmonic_omega) {
  const GridSupport& ax = dist.axis(axis);
  const int off = axis_offset(dist, axis);
  double step = harmonic_omega * ax.delta;
  for (int k = 0; k < ax.num_qubits; ++k) {
    Gate g;
    g.kind = Gate::Kind::CRy;
    g.control = off + k;
    g.target = c.ancilla;
    g.angle = step * static_cast<double>(std::int64_t{1} << k);
    c.gates.push_back(std::move(g));
  }
}

}  // namespace

Circuit build_state_prep(const DiscreteDistribution& dist) {
  const int width = dist.total_qubits();
  const std::int64_t dim = std::int64_t{1} << width;

  // The flat mass list is row-major (axis 0 slowest) while basis indices put
  // axis 0 on the low qubits, so reorder while taking square roots.
  Eigen::VectorXd amps = Eigen::VectorXd::Zero(dim);
  const int dims = dist.dimensions();
  std::vector<std::int64_t> value(dims, 0);
  for (std::int64_t flat = 0; flat < dist.flat_size(); ++flat) {
    std::int64_t rest = flat;
    for (int j = dims - 1; j >= 0; --j) {
      value[j] = rest % dist.axis(j).size();
      rest /= dist.axis(j).size();
    }
    std::int64_t basis = 0;
    int off = 0;
    for (int j = 0; j < dims; ++j) {
      basis |= value[j] << off;
      off += dist.axis(j).num_qubits;
    }
    amps[basis] = std::sqrt(dist.probs()[flat]);
  }

  Gate g;
  g.kind = Gate::Kind::StatePrep;
  g.span = width;
  g.amplitudes = std::move(amps);

  Circuit c;
  c.width = width;
  c.ancilla = -1;
  c.gates.push_back(std::move(g));
  return c;
}

Circuit build_A(const Circuit& prep, const DiscreteDistribution& dist, int axis,
                double beta, int n, double omega) {
  check_prep(prep, dist);
  const GridSupport& ax = dist.axis(axis);
  if (n < 1) throw std::invalid_argument("rotation bank: harmonic n must be >= 1");
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("rotation bank: omega must be positive");
  if (!std::isfinite(beta)) throw std::invalid_argument("rotation bank: beta not finite");

  Circuit c;
  c.width = prep.width + 1;
  c.ancilla = prep.width;
  c.gates = prep.gates;

  Gate base;
  base.kind = Gate::Kind::Ry;
  base.target = c.ancilla;
  base.angle = n * omega * ax.x_l - beta;
  c.gates.push_back(std::move(base));

  append_axis_rotations(c, dist, axis, n * omega);
  return c;
}

Circuit build_A_bivariate(const Circuit& prep, const DiscreteDistribution& dist,
                          int axis_i, int axis_j, double beta, int n, int m,
                          double omega1, double omega2) {
  check_prep(prep, dist);
  const GridSupport& ax_i = dist.axis(axis_i);
  const GridSupport& ax_j = dist.axis(axis_j);
  if (axis_i == axis_j)
    throw std::invalid_argument("rotation bank: the two axes must be distinct");
  if (n < 1) throw std::invalid_argument("rotation bank: harmonic n must be >= 1");
  if (m == 0) throw std::invalid_argument("rotation bank: harmonic m must be nonzero");
  if (!(omega1 > 0.0) || !(omega2 > 0.0))
    throw std::invalid_argument("rotation bank: omegas must be positive");
  if (!std::isfinite(beta)) throw std::invalid_argument("rotation bank: beta not finite");

  Circuit c;
  c.width = prep.width + 1;
  c.ancilla = prep.width;
  c.gates = prep.gates;

  Gate base;
  base.kind = Gate::Kind::Ry;
  base.target = c.ancilla;
  base.angle = n * omega1 * ax_i.x_l + m * omega2 * ax_j.x_l - beta;
  c.gates.push_back(std::move(base));

  append_axis_rotations(c, dist, axis_i, n * omega1);
  append_axis_rotations(c, dist, axis_j, m * omega2);
  return c;
}

Circuit build_grover_iterate(const Circuit& a) {
  if (a.ancilla < 0)
    throw std::invalid_argument("grover iterate: circuit has no ancilla");

  Circuit q;
  q.width = a.width;
  q.ancilla = a.ancilla;

  Gate flip;
  flip.kind = Gate::Kind::PhaseFlip;
  flip.target = a.ancilla;
  q.gates.push_back(std::move(flip));

  Gate undo;
  undo.kind = Gate::Kind::Inverse;
  undo.body = a.gates;
  q.gates.push_back(std::move(undo));

  // 2|0><0| - I rather than its negative, which folds the iterate's global
  // sign into the reflection.
  Gate reflect;
  reflect.kind = Gate::Kind::ReflectZero;
  reflect.span = a.width;
  q.gates.push_back(std::move(reflect));

  q.gates.insert(q.gates.end(), a.gates.begin(), a.gates.end());
  return q;
}

Circuit inverse_circuit(const Circuit& c) {
  Circuit inv;
  inv.width = c.width;
  inv.ancilla = c.ancilla;
  Gate g;
  g.kind = Gate::Kind::Inverse;
  g.body = c.gates;
  inv.gates.push_back(std::move(g));
  return inv;
}

namespace {

void dump_gates(const std::vector<Gate>& gates, int indent, std::ostringstream& out) {
  char buf[96];
  std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& g : gates) {
    switch (g.kind) {
      case Gate::Kind::StatePrep:
        out << pad << "state_prep qubits=[0," << g.span << ") dim=" << g.amplitudes.size()
            << "\n";
        break;
      case Gate::Kind::Ry:
        std::snprintf(buf, sizeof buf, "ry target=%d angle=%.12g", g.target, g.angle);
        out << pad << buf << "\n";
        break;
      case Gate::Kind::CRy:
        std::snprintf(buf, sizeof buf, "cry control=%d target=%d angle=%.12g", g.control,
                      g.target, g.angle);
        out << pad << buf << "\n";
        break;
      case Gate::Kind::PhaseFlip:
        out << pad << "phase_flip target=" << g.target << "\n";
        break;
      case Gate::Kind::ReflectZero:
        out << pad << "reflect_zero qubits=[0," << g.span << ")\n";
        break;
      case Gate::Kind::Inverse:
        out << pad << "inverse {\n";
        dump_gates(g.body, indent + 2, out);
        out << pad << "}\n";
        break;
    }
  }
}

}  // namespace

std::string dump_circuit(const Circuit& c) {
  std::ostringstream out;
  out << "circuit width=" << c.width << " ancilla=" << c.ancilla << "\n";
  dump_gates(c.gates, 2, out);
  return out.str();
}

}  // namespace fqmci
