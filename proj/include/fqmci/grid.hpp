#pragma once

#include <cstdint>

namespace fqmci {

inline constexpr int kMaxAxisQubits = 20;
inline constexpr int kMaxRegisterQubits = 24;  // all axes combined, ancilla excluded

// Uniform grid x_v = x_l + v * delta for v = 0 .. 2^num_qubits - 1.
struct GridSupport {
  double x_l = 0.0;
  double delta = 1.0;
  int num_qubits = 1;

  std::int64_t size() const { return std::int64_t{1} << num_qubits; }
  double point(std::int64_t v) const { return x_l + delta * static_cast<double>(v); }
  double x_u() const { return point(size() - 1); }
  double width() const { return x_u() - x_l; }
};

// Throws std::invalid_argument unless delta > 0 and 1 <= num_qubits <= kMaxAxisQubits.
GridSupport make_grid(double x_l, double delta, int num_qubits);

}  // namespace fqmci
