// Dense complex linear algebra: matrices, Kronecker products, partial traces,
// and a cyclic Jacobi eigensolver for Hermitian matrices.
//
// Register convention (fixed globally): qubit 0 is the most significant bit of
// a basis-state index, and system qubits precede ancilla qubits in joint
// registers. Tensor products put the left factor's indices most significant.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dissim {

using complexd = std::complex<double>;

// A caller broke an operation's contract (bad dimensions, invalid argument).
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical invariant was violated beyond tolerance (corrupted state).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shared numerical tolerances.
namespace tol {
inline constexpr double equality = 1e-10;        // exact-identity checks
inline constexpr double reconstruction = 1e-9;   // eigendecomposition residuals
inline constexpr double psd_slack = 1e-9;        // allowed negative eigenvalue
inline constexpr double imag_residue = 1e-9;     // allowed imaginary part of real scalars
}  // namespace tol

// Largest admissible matrix dimension (16 qubits).
inline constexpr int kMaxDim = 1 << 16;

// Dense row-major complex matrix.
struct CMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<complexd> data;

    CMatrix() = default;
    CMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c) {}

    complexd& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    const complexd& at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    bool square() const { return rows == cols; }

    static CMatrix zero(int r, int c) { return CMatrix(r, c); }
    static CMatrix identity(int n);
};

// Qubit register with its Hilbert-space dimension (dim == 2^qubit_count).
struct RegisterShape {
    int qubit_count = 0;
    int dim = 1;

    static RegisterShape qubits(int n);
};

enum class DropPosition { front, back };

struct EigResult {
    std::vector<double> eigenvalues;  // ascending
    CMatrix eigenvectors;             // columns; h = V diag(lambda) V^dagger
};

CMatrix tensor(const CMatrix& a, const CMatrix& b);
CMatrix partial_trace(const CMatrix& rho, RegisterShape keep, RegisterShape drop,
                      DropPosition drop_position);
EigResult herm_eig(const CMatrix& h);

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& a);
complexd trace(const CMatrix& a);
double frobenius_norm(const CMatrix& a);

// Tr[a b] without forming the product.
complexd trace_product(const CMatrix& a, const CMatrix& b);
// <psi| m |psi>.
complexd quadratic_form(std::span<const complexd> psi, const CMatrix& m);

CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(complexd s, const CMatrix& a);

// Largest entrywise |a - b|; matrices must agree in shape.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

bool all_finite(const CMatrix& a);
bool is_hermitian(const CMatrix& a, double tolerance = tol::equality);
bool is_unitary(const CMatrix& a, double tolerance = tol::equality);

}  // namespace dissim
