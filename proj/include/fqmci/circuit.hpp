#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "fqmci/distribution.hpp"

namespace fqmci {

// Gate vocabulary is deliberately small: state preparation, Y-rotations and
// their controlled form, an ancilla phase flip, the reflection about |0...0>,
// and a formal inverse block (gates undone in reverse order).
struct Gate {
  enum class Kind { StatePrep, Ry, CRy, PhaseFlip, ReflectZero, Inverse };

  Kind kind = Kind::Ry;
  int target = -1;   // Ry, CRy, PhaseFlip
  int control = -1;  // CRy
  double angle = 0.0;
  int span = 0;                // StatePrep, ReflectZero: qubits [0, span)
  Eigen::VectorXd amplitudes;  // StatePrep: real amplitudes, unit norm
  std::vector<Gate> body;      // Inverse
};

struct Circuit {
  int width = 0;
  int ancilla = -1;  // flag qubit index; -1 when the circuit has none
  std::vector<Gate> gates;
};

// |0...0> -> sum_l sqrt(p_l) |l>, with each axis register little-endian (bit k
// of an axis has weight 2^k) and axis 0 on the lowest qubits.
Circuit build_state_prep(const DiscreteDistribution& dist);

// Rotation-bank circuit: after `prep`, rotates the ancilla by n*omega*x - beta
// conditioned on the grid point x of `axis`, so the ancilla |1> probability is
// (1 - sum_l p_l cos(n*omega*x_l - beta)) / 2.
Circuit build_A(const Circuit& prep, const DiscreteDistribution& dist, int axis,
                double beta, int n, double omega);

// Two-axis rotation bank: ancilla angle n*omega1*x + m*omega2*y - beta. A
// negative m turns the phase into a difference; m must be nonzero and the two
// axes distinct.
Circuit build_A_bivariate(const Circuit& prep, const DiscreteDistribution& dist,
                          int axis_i, int axis_j, double beta, int n, int m,
                          double omega1, double omega2);

// One amplitude-amplification step for `a` (including its global sign), built
// from: ancilla phase flip, undo of a, reflection 2|0><0| - I, redo of a.
// Each iterate costs one use of a and one of its inverse.
Circuit build_grover_iterate(const Circuit& a);

Circuit inverse_circuit(const Circuit& c);

// Human-readable gate list; angles printed to 12 significant digits.
std::string dump_circuit(const Circuit& c);

}  // namespace fqmci
