#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>

#include "fqmci/circuit.hpp"
#include "fqmci/rng.hpp"

namespace fqmci {

inline constexpr int kMaxSimQubits = 25;

// Applies the circuit to `state` in place. The state must have dimension
// 2^width; circuits wider than kMaxSimQubits are rejected up front.
void apply_circuit(const Circuit& c, Eigen::VectorXcd& state);

// Runs the circuit on |0...0> and returns the final statevector.
Eigen::VectorXcd run(const Circuit& c);

// Probability that the circuit's ancilla measures 1.
double good_state_probability(const Circuit& c);

// theta_a = asin(sqrt(good_state_probability)), clamped into [0, pi/2].
double amplitude_angle(const Circuit& c);

// Measurement counts after m amplification steps on a circuit with amplitude
// angle theta: Binomial(shots, sin^2((2m+1) theta)). This is the sampling fast
// path; its agreement with full statevector simulation is covered by tests.
std::int64_t sample_grover_shots(double theta, std::int64_t m, std::int64_t shots,
                                 ShotSampler& rng);

}  // namespace fqmci
