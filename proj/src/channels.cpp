#include "dissim/channels.hpp"

#include <cmath>

#include "dissim/kernels.hpp"

namespace dissim {

void check_completeness(const KrausChannel& ch, double tolerance) {
    const int dim = 1 << ch.arity;
    CMatrix sum(dim, dim);
    for (const CMatrix& k : ch.kraus_ops) {
        if (k.rows != dim || k.cols != dim)
            throw ContractError("Kraus operator dimension does not match channel arity");
        sum = sum + matmul(adjoint(k), k);
    }
    if (max_abs_diff(sum, CMatrix::identity(dim)) > tolerance)
        throw NumericError("Kraus completeness violated beyond tolerance");
}

DensityMatrix apply_kraus(const KrausChannel& ch, const DensityMatrix& rho,
                          std::span<const int> targets) {
    if (static_cast<int>(targets.size()) != ch.arity)
        throw ContractError("apply_kraus: target count does not match channel arity");
    detail::validate_targets(targets, rho.shape.qubit_count);
    check_completeness(ch);
    DensityMatrix out{rho.shape,
                      detail::kraus_sum(rho.mat, ch.kraus_ops, targets, rho.shape.qubit_count)};
    if (std::abs(trace(out.mat) - trace(rho.mat)) > tol::equality)
        throw NumericError("apply_kraus: trace drifted beyond tolerance");
    return out;
}

KrausChannel make_noise(const NoiseSpec& spec) {
    if (spec.strength < 0.0 || spec.strength > 1.0)
        throw ContractError("noise strength must lie in [0,1]");
    KrausChannel ch;
    ch.arity = 1;
    const double p = spec.strength;
    if (!spec.enabled()) {
        ch.kraus_ops.push_back(CMatrix::identity(2));
        return ch;
    }
    switch (spec.kind) {
        case NoiseKind::depolarizing: {
            CMatrix i = CMatrix::identity(2), x(2, 2), y(2, 2), z(2, 2);
            x.at(0, 1) = 1.0;
            x.at(1, 0) = 1.0;
            y.at(0, 1) = complexd(0.0, -1.0);
            y.at(1, 0) = complexd(0.0, 1.0);
            z.at(0, 0) = 1.0;
            z.at(1, 1) = -1.0;
            ch.kraus_ops.push_back(complexd(std::sqrt(1.0 - p), 0.0) * i);
            for (const CMatrix& s : {x, y, z})
                ch.kraus_ops.push_back(complexd(std::sqrt(p / 3.0), 0.0) * s);
            break;
        }
        case NoiseKind::bit_flip: {
            CMatrix x(2, 2);
            x.at(0, 1) = 1.0;
            x.at(1, 0) = 1.0;
            ch.kraus_ops.push_back(complexd(std::sqrt(1.0 - p), 0.0) * CMatrix::identity(2));
            ch.kraus_ops.push_back(complexd(std::sqrt(p), 0.0) * x);
            break;
        }
        case NoiseKind::amplitude_damping: {
            CMatrix k0(2, 2), k1(2, 2);
            k0.at(0, 0) = 1.0;
            k0.at(1, 1) = std::sqrt(1.0 - p);
            k1.at(0, 1) = std::sqrt(p);
            ch.kraus_ops.push_back(std::move(k0));
            ch.kraus_ops.push_back(std::move(k1));
            break;
        }
        case NoiseKind::none:
            break;  // unreachable, enabled() is false
    }
    return ch;
}

DensityMatrix stinespring_apply(const CMatrix& v_sa, const DensityMatrix& rho_s,
                                int ancilla_count) {
    if (ancilla_count < 1) throw ContractError("stinespring_apply: need at least one ancilla");
    const RegisterShape anc = RegisterShape::qubits(ancilla_count);
    const long joint_dim = static_cast<long>(rho_s.shape.dim) * anc.dim;
    if (v_sa.rows != joint_dim || v_sa.cols != joint_dim)
        throw ContractError("stinespring_apply: unitary dimension mismatch");
    if (!is_unitary(v_sa, 1e-9)) throw ContractError("stinespring_apply: v_sa is not unitary");

    CMatrix anc0(anc.dim, anc.dim);
    anc0.at(0, 0) = 1.0;
    const CMatrix joint = tensor(rho_s.mat, anc0);
    const CMatrix evolved = matmul(matmul(v_sa, joint), adjoint(v_sa));
    return DensityMatrix{rho_s.shape,
                         partial_trace(evolved, rho_s.shape, anc, DropPosition::back)};
}

KrausChannel kraus_from_stinespring(const CMatrix& v_sa, int n, int m) {
    const int sys_dim = 1 << n;
    const int anc_dim = 1 << m;
    if (v_sa.rows != sys_dim * anc_dim || v_sa.cols != sys_dim * anc_dim)
        throw ContractError("kraus_from_stinespring: unitary dimension mismatch");
    if (!is_unitary(v_sa, 1e-9)) throw ContractError("kraus_from_stinespring: input not unitary");

    KrausChannel ch;
    ch.arity = n;
    ch.kraus_ops.reserve(anc_dim);
    for (int i = 0; i < anc_dim; ++i) {
        CMatrix k(sys_dim, sys_dim);
        for (int sp = 0; sp < sys_dim; ++sp)
            for (int s = 0; s < sys_dim; ++s) k.at(sp, s) = v_sa.at(sp * anc_dim + i, s * anc_dim);
        ch.kraus_ops.push_back(std::move(k));
    }
    check_completeness(ch);
    return ch;
}

DensityMatrix reset_channel(const DensityMatrix& rho, std::span<const int> targets, double q) {
    if (q <= 0.0 || q > 1.0) throw ContractError("reset probability must lie in (0,1]");
    detail::validate_targets(targets, rho.shape.qubit_count);
    const int dim = rho.shape.dim;
    const int k = static_cast<int>(targets.size());
    const int sub = 1 << k;
    int group_mask = 0;
    std::vector<int> offsets(sub, 0);
    for (int t = 0; t < k; ++t) {
        const int mask = 1 << (rho.shape.qubit_count - 1 - targets[t]);
        group_mask |= mask;
        for (int a = 0; a < sub; ++a)
            if ((a >> (k - 1 - t)) & 1) offsets[a] |= mask;
    }

    CMatrix out = rho.mat;
    if (q < 1.0)
        for (auto& x : out.data) x *= 1.0 - q;
    else
        out.data.assign(out.data.size(), complexd(0.0, 0.0));
    // q * (Tr_R[rho] (x) |0><0|_R): lands on elements whose target bits vanish.
    for (int r = 0; r < dim; ++r) {
        if (r & group_mask) continue;
        for (int c = 0; c < dim; ++c) {
            if (c & group_mask) continue;
            complexd s = 0.0;
            for (int a = 0; a < sub; ++a) s += rho.mat.at(r + offsets[a], c + offsets[a]);
            out.at(r, c) += q * s;
        }
    }
    return DensityMatrix{rho.shape, std::move(out)};
}

DensityMatrix inject_noise(const DensityMatrix& rho, const NoiseSpec& spec,
                           std::span<const int> touched) {
    if (spec.strength < 0.0 || spec.strength > 1.0)
        throw ContractError("noise strength must lie in [0,1]");
    DensityMatrix out = rho;
    detail::inject_noise_inplace(out.mat, spec, touched, rho.shape.qubit_count);
    return out;
}

namespace detail {

void inject_noise_inplace(CMatrix& rho, const NoiseSpec& spec, std::span<const int> touched,
                          int qubit_count) {
    if (!spec.enabled()) return;
    validate_targets(touched, qubit_count);
    for (int q : touched) {
        switch (spec.kind) {
            case NoiseKind::depolarizing:
                apply_depolarizing(rho, q, qubit_count, spec.strength);
                break;
            case NoiseKind::bit_flip:
                apply_bit_flip(rho, q, qubit_count, spec.strength);
                break;
            case NoiseKind::amplitude_damping:
                apply_amplitude_damping(rho, q, qubit_count, spec.strength);
                break;
            case NoiseKind::none:
                break;
        }
    }
}

}  // namespace detail

}  // namespace dissim
