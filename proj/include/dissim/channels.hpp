// CPTP maps: Kraus channels, the single-qubit noise family, Stinespring
// dilation and extraction, probabilistic reset, and per-qubit noise injection.
#pragma once

#include <span>
#include <vector>

#include "dissim/states.hpp"

namespace dissim {

// A CPTP map on `arity` qubits as a list of Kraus operators.
struct KrausChannel {
    int arity = 1;
    std::vector<CMatrix> kraus_ops;
};

enum class NoiseKind { none, depolarizing, bit_flip, amplitude_damping };

// Where a noise spec applies. fully_noisy covers both the system-only blocks
// and the dissipative blocks; system_only restricts to the system-only
// variational blocks; input_only corrupts the prepared input state once and
// leaves the circuit ideal. The training pipelines inject one layer of the
// single-qubit channel on the block's register after each covered block;
// apply_circuit offers per-gate injection for fine-grained models.
enum class NoiseLocation { fully_noisy, system_only, input_only };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::none;
    double strength = 0.0;
    NoiseLocation location = NoiseLocation::fully_noisy;

    bool enabled() const { return kind != NoiseKind::none && strength > 0.0; }
    static NoiseSpec off() { return NoiseSpec{}; }
};

// Throws unless sum_i K_i^dagger K_i == I within tolerance.
void check_completeness(const KrausChannel& ch, double tolerance = tol::equality);

DensityMatrix apply_kraus(const KrausChannel& ch, const DensityMatrix& rho,
                          std::span<const int> targets);

// Single-qubit channel for the given noise kind and strength:
//   depolarizing: {sqrt(1-p) I, sqrt(p/3) X, sqrt(p/3) Y, sqrt(p/3) Z}
//   bit_flip:     {sqrt(1-p) I, sqrt(p) X}
//   amplitude_damping: {[[1,0],[0,sqrt(1-p)]], [[0,sqrt(p)],[0,0]]}
KrausChannel make_noise(const NoiseSpec& spec);

// Tr_A[V (rho_S (x) |0><0|^m) V^dagger]; ancillas occupy the least significant
// index bits, matching the global register convention.
DensityMatrix stinespring_apply(const CMatrix& v_sa, const DensityMatrix& rho_s,
                                int ancilla_count);

// K_i = <i|_A V_SA |0>_A, one operator per ancilla basis state.
KrausChannel kraus_from_stinespring(const CMatrix& v_sa, int n, int m);

// (1-q) rho + q (Tr_R[rho] (x) |0><0|_R), targets reset with probability q.
DensityMatrix reset_channel(const DensityMatrix& rho, std::span<const int> targets, double q);

// Applies the single-qubit channel make_noise(spec) independently to each
// touched qubit; identity when the spec is disabled.
DensityMatrix inject_noise(const DensityMatrix& rho, const NoiseSpec& spec,
                           std::span<const int> touched);

namespace detail {
// In-place variant used on the circuit hot path; assumes spec validated.
void inject_noise_inplace(CMatrix& rho, const NoiseSpec& spec, std::span<const int> touched,
                          int qubit_count);
}  // namespace detail

}  // namespace dissim
