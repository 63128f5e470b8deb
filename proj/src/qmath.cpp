#include "dissim/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dissim {

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

RegisterShape RegisterShape::qubits(int n) {
    if (n < 0 || n > 16) throw ContractError("register size out of range: " + std::to_string(n));
    return RegisterShape{n, 1 << n};
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
    if (!all_finite(a) || !all_finite(b)) throw NumericError("tensor: non-finite input");
    const long rr = static_cast<long>(a.rows) * b.rows;
    const long cc = static_cast<long>(a.cols) * b.cols;
    if (rr > kMaxDim || cc > kMaxDim) throw ContractError("tensor: result dimension exceeds 2^16");
    CMatrix out(static_cast<int>(rr), static_cast<int>(cc));
    for (int ia = 0; ia < a.rows; ++ia)
        for (int ja = 0; ja < a.cols; ++ja) {
            const complexd va = a.at(ia, ja);
            if (va == complexd(0.0, 0.0)) continue;
            for (int ib = 0; ib < b.rows; ++ib) {
                const complexd* brow = &b.data[static_cast<size_t>(ib) * b.cols];
                complexd* orow =
                    &out.data[(static_cast<size_t>(ia) * b.rows + ib) * out.cols +
                              static_cast<size_t>(ja) * b.cols];
                for (int jb = 0; jb < b.cols; ++jb) orow[jb] = va * brow[jb];
            }
        }
    return out;
}

CMatrix partial_trace(const CMatrix& rho, RegisterShape keep, RegisterShape drop,
                      DropPosition drop_position) {
    if (!rho.square()) throw ContractError("partial_trace: input must be square");
    const long joint = static_cast<long>(keep.dim) * drop.dim;
    if (joint != rho.rows)
        throw ContractError("partial_trace: dim mismatch, keep*drop=" + std::to_string(joint) +
                            " vs rho dim " + std::to_string(rho.rows));
    const int K = keep.dim;
    const int R = drop.dim;
    CMatrix out(K, K);
    if (drop_position == DropPosition::back) {
        // joint index = kept * R + dropped
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) {
                complexd s = 0.0;
                for (int r = 0; r < R; ++r)
                    s += rho.at(i * R + r, j * R + r);
                out.at(i, j) = s;
            }
    } else {
        // joint index = dropped * K + kept
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) {
                complexd s = 0.0;
                for (int r = 0; r < R; ++r)
                    s += rho.at(r * K + i, r * K + j);
                out.at(i, j) = s;
            }
    }
    return out;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols != b.rows) throw ContractError("matmul: inner dimensions disagree");
    CMatrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        complexd* orow = &out.data[static_cast<size_t>(i) * out.cols];
        for (int k = 0; k < a.cols; ++k) {
            const complexd aik = a.at(i, k);
            if (aik == complexd(0.0, 0.0)) continue;
            const complexd* brow = &b.data[static_cast<size_t>(k) * b.cols];
            for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix out(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) out.at(j, i) = std::conj(a.at(i, j));
    return out;
}

complexd trace(const CMatrix& a) {
    if (!a.square()) throw ContractError("trace: matrix must be square");
    complexd s = 0.0;
    for (int i = 0; i < a.rows; ++i) s += a.at(i, i);
    return s;
}

double frobenius_norm(const CMatrix& a) {
    double s = 0.0;
    for (const complexd& x : a.data) s += std::norm(x);
    return std::sqrt(s);
}

complexd trace_product(const CMatrix& a, const CMatrix& b) {
    if (a.cols != b.rows || a.rows != b.cols) throw ContractError("trace_product: shape mismatch");
    complexd s = 0.0;
    for (int i = 0; i < a.rows; ++i) {
        const complexd* arow = &a.data[static_cast<size_t>(i) * a.cols];
        for (int j = 0; j < a.cols; ++j) s += arow[j] * b.at(j, i);
    }
    return s;
}

complexd quadratic_form(std::span<const complexd> psi, const CMatrix& m) {
    if (static_cast<int>(psi.size()) != m.rows || !m.square())
        throw ContractError("quadratic_form: shape mismatch");
    complexd s = 0.0;
    for (int i = 0; i < m.rows; ++i) {
        complexd row = 0.0;
        const complexd* r = &m.data[static_cast<size_t>(i) * m.cols];
        for (int j = 0; j < m.cols; ++j) row += r[j] * psi[j];
        s += std::conj(psi[i]) * row;
    }
    return s;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ContractError("operator+: shape mismatch");
    CMatrix out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ContractError("operator-: shape mismatch");
    CMatrix out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

CMatrix operator*(complexd s, const CMatrix& a) {
    CMatrix out = a;
    for (complexd& x : out.data) x *= s;
    return out;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ContractError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

bool all_finite(const CMatrix& a) {
    for (const complexd& x : a.data)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

bool is_hermitian(const CMatrix& a, double tolerance) {
    if (!a.square()) return false;
    for (int i = 0; i < a.rows; ++i)
        for (int j = i; j < a.cols; ++j)
            if (std::abs(a.at(i, j) - std::conj(a.at(j, i))) > tolerance) return false;
    return true;
}

bool is_unitary(const CMatrix& a, double tolerance) {
    if (!a.square()) return false;
    const CMatrix p = matmul(adjoint(a), a);
    return max_abs_diff(p, CMatrix::identity(a.rows)) <= tolerance;
}

namespace {

// One two-sided Jacobi rotation zeroing the (p, q) off-diagonal pair of a
// Hermitian matrix: A <- U^dagger A U with U embedding the 2x2 unitary
//   [[c, -s*w], [s*conj(w), c]],  w = a_pq / |a_pq|.
void jacobi_rotate(CMatrix& a, CMatrix& v, int p, int q) {
    const complexd apq = a.at(p, q);
    const double b = std::abs(apq);
    if (b == 0.0) return;
    const complexd w = apq / b;
    const double alpha = a.at(p, p).real();
    const double gamma = a.at(q, q).real();
    // Zeroing a'_pq needs b(c^2 - s^2) + cs(gamma - alpha) = 0; take the
    // small-magnitude root of t^2 - 2*tau*t - 1 = 0 for stability.
    const double tau = (gamma - alpha) / (2.0 * b);
    const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const int n = a.rows;
    // Row update: rows p and q of U^dagger A.
    for (int j = 0; j < n; ++j) {
        const complexd apj = a.at(p, j);
        const complexd aqj = a.at(q, j);
        a.at(p, j) = c * apj + s * w * aqj;
        a.at(q, j) = -s * std::conj(w) * apj + c * aqj;
    }
    // Column update: columns p and q of (U^dagger A) U.
    for (int i = 0; i < n; ++i) {
        const complexd aip = a.at(i, p);
        const complexd aiq = a.at(i, q);
        a.at(i, p) = c * aip + s * std::conj(w) * aiq;
        a.at(i, q) = -s * w * aip + c * aiq;
    }
    // Diagonals are real by construction; scrub rounding drift.
    a.at(p, p) = complexd(a.at(p, p).real(), 0.0);
    a.at(q, q) = complexd(a.at(q, q).real(), 0.0);
    a.at(p, q) = 0.0;
    a.at(q, p) = 0.0;

    for (int i = 0; i < n; ++i) {
        const complexd vip = v.at(i, p);
        const complexd viq = v.at(i, q);
        v.at(i, p) = c * vip + s * std::conj(w) * viq;
        v.at(i, q) = -s * w * vip + c * viq;
    }
}

double offdiag_norm(const CMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            if (i != j) s += std::norm(a.at(i, j));
    return std::sqrt(s);
}

}  // namespace

EigResult herm_eig(const CMatrix& h) {
    if (!h.square()) throw ContractError("herm_eig: matrix must be square");
    if (!all_finite(h)) throw NumericError("herm_eig: non-finite input");
    const int n = h.rows;

    // Symmetrize (h + h^dagger)/2 so rounding-level asymmetry never leaks in.
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a.at(i, j) = 0.5 * (h.at(i, j) + std::conj(h.at(j, i)));

    CMatrix v = CMatrix::identity(n);
    const double scale = std::max(1.0, frobenius_norm(a));
    const double target = 1e-14 * scale;
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && offdiag_norm(a) > target; ++sweep) {
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q)
                if (std::abs(a.at(p, q)) > target / (static_cast<double>(n) * n))
                    jacobi_rotate(a, v, p, q);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a.at(i, i).real() < a.at(j, j).real(); });

    EigResult res;
    res.eigenvalues.resize(n);
    res.eigenvectors = CMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        res.eigenvalues[k] = a.at(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) res.eigenvectors.at(i, k) = v.at(i, order[k]);
    }
    return res;
}

}  // namespace dissim
