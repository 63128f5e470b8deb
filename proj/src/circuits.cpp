#include "dissim/circuits.hpp"

#include <cmath>

#include "dissim/kernels.hpp"

namespace dissim {

bool is_rotation(GateKind kind) {
    return kind == GateKind::rx || kind == GateKind::ry || kind == GateKind::rz;
}

void check_circuit(const ParamCircuit& c) {
    std::vector<int> uses(c.param_count, 0);
    for (const Gate& g : c.gates) {
        if (is_rotation(g.kind)) {
            if (g.targets.size() != 1 || g.param_index < 0)
                throw ContractError("rotation gates need one target and a parameter index");
            if (g.param_index >= c.param_count)
                throw ContractError("parameter index out of range");
            ++uses[g.param_index];
        } else {
            if (g.targets.size() != 2 || g.targets[0] == g.targets[1] || g.param_index >= 0)
                throw ContractError("two-qubit gates need two distinct targets and no parameter");
        }
        for (int t : g.targets)
            if (t < 0 || t >= c.qubit_count) throw ContractError("gate target out of range");
    }
    for (int u : uses)
        if (u > 1) throw ContractError("parameter index used by more than one gate");
}

CMatrix gate_matrix(const Gate& g, std::optional<double> theta) {
    if (is_rotation(g.kind) != theta.has_value())
        throw ContractError("rotation gates take exactly one angle, fixed gates none");
    switch (g.kind) {
        case GateKind::rx: {
            const double h = 0.5 * *theta;
            CMatrix m(2, 2);
            m.at(0, 0) = std::cos(h);
            m.at(0, 1) = complexd(0.0, -std::sin(h));
            m.at(1, 0) = complexd(0.0, -std::sin(h));
            m.at(1, 1) = std::cos(h);
            return m;
        }
        case GateKind::ry: {
            const double h = 0.5 * *theta;
            CMatrix m(2, 2);
            m.at(0, 0) = std::cos(h);
            m.at(0, 1) = -std::sin(h);
            m.at(1, 0) = std::sin(h);
            m.at(1, 1) = std::cos(h);
            return m;
        }
        case GateKind::rz: {
            const double h = 0.5 * *theta;
            CMatrix m(2, 2);
            m.at(0, 0) = complexd(std::cos(h), -std::sin(h));
            m.at(1, 1) = complexd(std::cos(h), std::sin(h));
            return m;
        }
        case GateKind::cz: {
            CMatrix m = CMatrix::identity(4);
            m.at(3, 3) = -1.0;
            return m;
        }
        case GateKind::iswap: {
            CMatrix m(4, 4);
            m.at(0, 0) = 1.0;
            m.at(1, 2) = complexd(0.0, 1.0);
            m.at(2, 1) = complexd(0.0, 1.0);
            m.at(3, 3) = 1.0;
            return m;
        }
        case GateKind::cnot: {
            CMatrix m(4, 4);
            m.at(0, 0) = 1.0;
            m.at(1, 1) = 1.0;
            m.at(2, 3) = 1.0;
            m.at(3, 2) = 1.0;
            return m;
        }
    }
    throw ContractError("unknown gate kind");
}

ParamCircuit build_vqe_block(int n, int layers, int param_offset) {
    if (n < 1 || layers < 1) throw ContractError("build_vqe_block: n and layers must be >= 1");
    ParamCircuit c;
    c.qubit_count = n;
    int p = param_offset;
    for (int layer = 0; layer < layers; ++layer) {
        for (int q = 0; q < n; ++q) c.gates.push_back({GateKind::ry, {q}, p++});
        for (int q = 0; q < n; ++q) c.gates.push_back({GateKind::rz, {q}, p++});
        for (int q = 0; q + 1 < n; ++q) c.gates.push_back({GateKind::cz, {q, q + 1}, -1});
    }
    c.param_count = p;
    return c;
}

int dissipative_block_param_count(int n, int m) { return 2 * n * m + 3 * n; }

ParamCircuit build_dissipative_block(int n, int m, int param_offset) {
    if (n < 1 || m < 1) throw ContractError("build_dissipative_block: n and m must be >= 1");
    ParamCircuit c;
    c.qubit_count = n + m;
    int p = param_offset;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            c.gates.push_back({GateKind::ry, {i}, p++});
            c.gates.push_back({GateKind::ry, {n + j}, p++});
            c.gates.push_back({GateKind::iswap, {i, n + j}, -1});
        }
    for (int i = 0; i < n; ++i) {
        c.gates.push_back({GateKind::rz, {i}, p++});
        c.gates.push_back({GateKind::ry, {i}, p++});
        c.gates.push_back({GateKind::rz, {i}, p++});
    }
    c.param_count = p;
    if (p - param_offset != dissipative_block_param_count(n, m))
        throw ContractError("dissipative block parameter layout inconsistent");
    return c;
}

namespace detail {

void apply_gate_inplace(CMatrix& rho, const Gate& g, std::span<const double> theta,
                        int qubit_count) {
    switch (g.kind) {
        case GateKind::rz: {
            const double h = 0.5 * theta[g.param_index];
            conjugate_diag1(rho, complexd(std::cos(h), -std::sin(h)),
                            complexd(std::cos(h), std::sin(h)), g.targets[0], qubit_count);
            return;
        }
        case GateKind::cz:
            conjugate_cz(rho, g.targets[0], g.targets[1], qubit_count);
            return;
        case GateKind::iswap:
            conjugate_iswap(rho, g.targets[0], g.targets[1], qubit_count);
            return;
        case GateKind::rx:
        case GateKind::ry:
            conjugate_1q(rho, gate_matrix(g, theta[g.param_index]), g.targets[0], qubit_count);
            return;
        default: {
            const std::optional<double> angle =
                is_rotation(g.kind) ? std::optional<double>(theta[g.param_index]) : std::nullopt;
            conjugate_gate(rho, gate_matrix(g, angle), g.targets, qubit_count);
            return;
        }
    }
}

void apply_circuit_inplace(CMatrix& rho, const ParamCircuit& c, std::span<const double> theta,
                           const NoiseSpec& noise, size_t start_gate) {
    for (size_t i = start_gate; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        apply_gate_inplace(rho, g, theta, c.qubit_count);
        if (noise.enabled()) inject_noise_inplace(rho, noise, g.targets, c.qubit_count);
    }
}

}  // namespace detail

DensityMatrix apply_circuit(const ParamCircuit& c, std::span<const double> theta,
                            const DensityMatrix& rho, const NoiseSpec& noise) {
    if (static_cast<int>(theta.size()) != c.param_count)
        throw ContractError("apply_circuit: parameter vector length mismatch");
    if (rho.shape.qubit_count != c.qubit_count)
        throw ContractError("apply_circuit: register size mismatch");
    check_circuit(c);
    DensityMatrix out = rho;
    detail::apply_circuit_inplace(out.mat, c, theta, noise);
    return out;
}

CMatrix circuit_unitary(const ParamCircuit& c, std::span<const double> theta) {
    if (static_cast<int>(theta.size()) != c.param_count)
        throw ContractError("circuit_unitary: parameter vector length mismatch");
    check_circuit(c);
    const int dim = 1 << c.qubit_count;
    CMatrix u = CMatrix::identity(dim);
    for (const Gate& g : c.gates) {
        const std::optional<double> angle =
            is_rotation(g.kind) ? std::optional<double>(theta[g.param_index]) : std::nullopt;
        detail::left_multiply_gate(u, gate_matrix(g, angle), g.targets, c.qubit_count);
    }
    return u;
}

}  // namespace dissim
