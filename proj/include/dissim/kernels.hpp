// Low-level density-matrix update kernels shared by the channels and circuits
// modules. Operators act on a subset of qubits and are embedded by index
// arithmetic rather than full-dimension Kronecker padding, keeping the cost at
// O(4^n * 4^arity).
#pragma once

#include <span>

#include "dissim/qmath.hpp"

namespace dissim::detail {

void validate_targets(std::span<const int> targets, int qubit_count);

// rho <- (G on targets) rho (G on targets)^dagger, in place. G is 2^k square
// for k = targets.size(); targets[0] is the most significant gate index bit.
void conjugate_gate(CMatrix& rho, const CMatrix& g, std::span<const int> targets,
                    int qubit_count);

// out = sum_i (K_i on targets) rho (K_i on targets)^dagger.
CMatrix kraus_sum(const CMatrix& rho, std::span<const CMatrix> ops,
                  std::span<const int> targets, int qubit_count);

// m <- (G on targets) m; builds operator products without Kronecker padding.
void left_multiply_gate(CMatrix& m, const CMatrix& g, std::span<const int> targets,
                        int qubit_count);

// Specializations used on the circuit hot path.
void conjugate_1q(CMatrix& rho, const CMatrix& g, int q, int qubit_count);
void conjugate_diag1(CMatrix& rho, complexd g0, complexd g1, int q, int qubit_count);
void conjugate_cz(CMatrix& rho, int q1, int q2, int qubit_count);
void conjugate_iswap(CMatrix& rho, int q1, int q2, int qubit_count);

// Single-qubit noise channels, applied in place.
void apply_depolarizing(CMatrix& rho, int q, int qubit_count, double p);
void apply_bit_flip(CMatrix& rho, int q, int qubit_count, double p);
void apply_amplitude_damping(CMatrix& rho, int q, int qubit_count, double p);

}  // namespace dissim::detail
