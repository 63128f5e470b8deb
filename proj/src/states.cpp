#include "dissim/states.hpp"

#include <cmath>

#include "dissim/hamiltonian.hpp"

namespace dissim {

namespace {

// Clamp a fidelity-like scalar into [0,1]; excursions beyond slack are treated
// as corruption, not rounding.
double clamp_unit_interval(double v, const char* what) {
    if (v < -tol::psd_slack || v > 1.0 + tol::psd_slack)
        throw NumericError(std::string(what) + ": value " + std::to_string(v) +
                           " outside [0,1] beyond tolerance");
    return std::min(1.0, std::max(0.0, v));
}

// PSD square root via eigendecomposition, negative rounding noise clamped.
CMatrix psd_sqrt(const CMatrix& m) {
    const EigResult e = herm_eig(m);
    const int n = m.rows;
    CMatrix out(n, n);
    for (int k = 0; k < n; ++k) {
        const double lam = std::max(0.0, e.eigenvalues[k]);
        const double root = std::sqrt(lam);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out.at(i, j) += root * e.eigenvectors.at(i, k) * std::conj(e.eigenvectors.at(j, k));
    }
    return out;
}

}  // namespace

void check_density_cheap(const DensityMatrix& rho) {
    if (rho.mat.rows != rho.shape.dim || rho.mat.cols != rho.shape.dim)
        throw ContractError("density matrix shape mismatch");
    if (!all_finite(rho.mat)) throw NumericError("density matrix has non-finite entries");
    if (!is_hermitian(rho.mat, tol::equality))
        throw NumericError("density matrix not Hermitian within tolerance");
    if (std::abs(trace(rho.mat) - complexd(1.0, 0.0)) > tol::equality)
        throw NumericError("density matrix trace differs from 1 beyond tolerance");
}

void check_density_full(const DensityMatrix& rho) {
    check_density_cheap(rho);
    if (min_eigenvalue(rho.mat) < -tol::psd_slack)
        throw NumericError("density matrix not positive semidefinite within tolerance");
}

double min_eigenvalue(const CMatrix& hermitian) {
    return herm_eig(hermitian).eigenvalues.front();
}

DensityMatrix zero_state(int n) {
    if (n < 1) throw ContractError("zero_state: need at least one qubit");
    const RegisterShape shape = RegisterShape::qubits(n);
    CMatrix m(shape.dim, shape.dim);
    m.at(0, 0) = 1.0;
    return DensityMatrix{shape, std::move(m)};
}

PureState w_state(int n) {
    if (n < 2) throw ContractError("w_state: need at least two qubits");
    const RegisterShape shape = RegisterShape::qubits(n);
    std::vector<complexd> amps(shape.dim, 0.0);
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (int q = 0; q < n; ++q) amps[static_cast<size_t>(1) << (n - 1 - q)] = a;
    return PureState{shape, std::move(amps)};
}

PureState plus_state(int n) {
    if (n < 1) throw ContractError("plus_state: need at least one qubit");
    const RegisterShape shape = RegisterShape::qubits(n);
    std::vector<complexd> amps(shape.dim, 1.0 / std::sqrt(static_cast<double>(shape.dim)));
    return PureState{shape, std::move(amps)};
}

PureState dressed_cluster_state(int n, int depth,
                                const std::vector<std::vector<double>>& angles) {
    if (n < 2) throw ContractError("dressed_cluster_state: need at least two qubits");
    if (static_cast<int>(angles.size()) != depth)
        throw ContractError("dressed_cluster_state: angle matrix must have depth rows");
    for (const auto& row : angles)
        if (static_cast<int>(row.size()) != n)
            throw ContractError("dressed_cluster_state: angle rows must have n columns");

    PureState psi = plus_state(n);
    const int dim = psi.shape.dim;
    for (int d = 0; d < depth; ++d) {
        // Per-qubit Ry(angle) layer, then the open-boundary CZ chain.
        for (int q = 0; q < n; ++q) {
            const double half = 0.5 * angles[d][q];
            const double c = std::cos(half), s = std::sin(half);
            const int stride = 1 << (n - 1 - q);
            for (int base = 0; base < dim; ++base) {
                if (base & stride) continue;
                const complexd a0 = psi.amplitudes[base];
                const complexd a1 = psi.amplitudes[base | stride];
                psi.amplitudes[base] = c * a0 - s * a1;
                psi.amplitudes[base | stride] = s * a0 + c * a1;
            }
        }
        for (int q = 0; q + 1 < n; ++q) {
            const int b1 = 1 << (n - 1 - q);
            const int b2 = 1 << (n - 2 - q);
            for (int idx = 0; idx < dim; ++idx)
                if ((idx & b1) && (idx & b2)) psi.amplitudes[idx] = -psi.amplitudes[idx];
        }
    }
    // Unitary layers preserve the norm; renormalize rounding residue anyway.
    double norm = 0.0;
    for (const auto& a : psi.amplitudes) norm += std::norm(a);
    norm = std::sqrt(norm);
    for (auto& a : psi.amplitudes) a /= norm;
    return psi;
}

DensityMatrix projector(const PureState& psi) {
    const int dim = psi.shape.dim;
    CMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m.at(i, j) = psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
    return DensityMatrix{psi.shape, std::move(m)};
}

double fidelity_pure(const DensityMatrix& rho, const PureState& target) {
    if (rho.shape.dim != target.shape.dim) throw ContractError("fidelity_pure: shape mismatch");
    const complexd val = quadratic_form(target.amplitudes, rho.mat);
    if (std::abs(val.imag()) > tol::imag_residue)
        throw NumericError("fidelity_pure: imaginary residue " + std::to_string(val.imag()));
    return clamp_unit_interval(val.real(), "fidelity_pure");
}

double fidelity_general(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.shape.dim != sigma.shape.dim) throw ContractError("fidelity_general: shape mismatch");
    if (min_eigenvalue(rho.mat) < -tol::psd_slack || min_eigenvalue(sigma.mat) < -tol::psd_slack)
        throw NumericError("fidelity_general: input not PSD within tolerance");
    const CMatrix root = psd_sqrt(sigma.mat);
    const CMatrix inner = matmul(matmul(root, rho.mat), root);
    const EigResult e = herm_eig(inner);
    // Eigenvalues at the eigensolver's noise floor are rank-deficiency
    // artifacts; their square roots would otherwise inflate the sum.
    const double floor = 1e-13 * std::max(1.0, e.eigenvalues.back());
    double s = 0.0;
    for (double lam : e.eigenvalues)
        if (lam > floor) s += std::sqrt(lam);
    return clamp_unit_interval(s * s, "fidelity_general");
}

double expectation_dense(const CMatrix& h_dense, const DensityMatrix& rho) {
    if (h_dense.rows != rho.shape.dim) throw ContractError("expectation: dimension mismatch");
    const complexd val = trace_product(h_dense, rho.mat);
    if (std::abs(val.imag()) > tol::imag_residue)
        throw NumericError("expectation: imaginary residue " + std::to_string(val.imag()));
    return val.real();
}

double expectation(const PauliHamiltonian& h, const DensityMatrix& rho) {
    if (h.qubit_count != rho.shape.qubit_count)
        throw ContractError("expectation: qubit count mismatch");
    return expectation_dense(to_dense(h), rho);
}

double purity(const DensityMatrix& rho) {
    // Tr[rho^2] with rho Hermitian equals the squared Frobenius norm.
    const double f = frobenius_norm(rho.mat);
    return f * f;
}

}  // namespace dissim
