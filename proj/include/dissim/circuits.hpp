// Gate set, parameterized circuit construction for the system-only variational
// block and the system-ancilla dissipative block, and application of circuits
// to density matrices with optional per-gate noise injection.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dissim/channels.hpp"

namespace dissim {

enum class GateKind { rx, ry, rz, cz, iswap, cnot };

bool is_rotation(GateKind kind);

struct Gate {
    GateKind kind;
    std::vector<int> targets;
    int param_index = -1;  // valid iff the gate is a rotation
};

// Ordered gate list over a flat parameter vector. param_count is the length of
// the global vector the gates index into, so blocks built with a nonzero
// param_offset share one vector with their siblings.
struct ParamCircuit {
    int qubit_count = 0;
    std::vector<Gate> gates;
    int param_count = 0;
};

void check_circuit(const ParamCircuit& c);

CMatrix gate_matrix(const Gate& g, std::optional<double> theta);

// Hardware-efficient system block: per layer, Ry then Rz on every qubit
// followed by an open-boundary CZ chain. 2*n*layers parameters.
ParamCircuit build_vqe_block(int n, int layers, int param_offset);

// Dissipative block on n system + m ancilla qubits: the fully connected
// system-ancilla iSWAP mesh in lexicographic (system, ancilla) order, each
// coupling dressed with trainable Ry rotations on its two involved qubits,
// followed by an Rz-Ry-Rz layer on the system qubits. 2nm + 3n parameters.
ParamCircuit build_dissipative_block(int n, int m, int param_offset);
int dissipative_block_param_count(int n, int m);

// Gates applied in order as rho -> G rho G^dagger; after each gate, noise is
// injected on the touched qubits when the spec is enabled.
DensityMatrix apply_circuit(const ParamCircuit& c, std::span<const double> theta,
                            const DensityMatrix& rho, const NoiseSpec& noise);

CMatrix circuit_unitary(const ParamCircuit& c, std::span<const double> theta);

namespace detail {
// Hot-path variants; start_gate allows resuming mid-circuit from a cached
// prefix state.
void apply_gate_inplace(CMatrix& rho, const Gate& g, std::span<const double> theta,
                        int qubit_count);
void apply_circuit_inplace(CMatrix& rho, const ParamCircuit& c, std::span<const double> theta,
                           const NoiseSpec& noise, size_t start_gate = 0);
}  // namespace detail

}  // namespace dissim
