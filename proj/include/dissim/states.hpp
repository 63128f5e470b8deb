// Density matrices, pure target states, and the fidelity / expectation
// functionals evaluated on them.
#pragma once

#include <vector>

#include "dissim/qmath.hpp"

namespace dissim {

struct PauliHamiltonian;  // hamiltonian.hpp

// Hermitian, unit-trace, PSD (up to rounding) state of a qubit register.
struct DensityMatrix {
    RegisterShape shape;
    CMatrix mat;
};

struct PureState {
    RegisterShape shape;
    std::vector<complexd> amplitudes;
};

// Invariant checks. The cheap check (Hermiticity + unit trace) is O(dim^2);
// the PSD check costs a full eigendecomposition and is intended for tests and
// validation points, not per-gate hot paths.
void check_density_cheap(const DensityMatrix& rho);
void check_density_full(const DensityMatrix& rho);
double min_eigenvalue(const CMatrix& hermitian);

DensityMatrix zero_state(int n);
PureState w_state(int n);
PureState plus_state(int n);
// Alternating single-qubit Ry layers and open-boundary CZ chains applied to
// |+>^n; angles is depth x n (row d = layer d's per-qubit angles).
PureState dressed_cluster_state(int n, int depth, const std::vector<std::vector<double>>& angles);

DensityMatrix projector(const PureState& psi);

double fidelity_pure(const DensityMatrix& rho, const PureState& target);
double fidelity_general(const DensityMatrix& rho, const DensityMatrix& sigma);
double expectation(const PauliHamiltonian& h, const DensityMatrix& rho);
double expectation_dense(const CMatrix& h_dense, const DensityMatrix& rho);

double purity(const DensityMatrix& rho);

}  // namespace dissim
