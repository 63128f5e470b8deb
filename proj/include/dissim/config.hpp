// Run configuration: a flat key = value text document, one experiment per
// file. Parsing fills documented defaults, rejects unknown or inapplicable
// keys, and reports every violated invariant at once.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dissim/engine.hpp"

namespace dissim {

enum class Task { dvqe, recover, scan_ancilla, scan_rounds, scan_noise, eig, diag };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A scan point keeps the literal config token so output files are labeled
// exactly as the user wrote the value.
struct ScanValue {
    double value = 0.0;
    std::string label;

    bool operator==(const ScanValue&) const = default;
};

struct RunConfig {
    Task task = Task::dvqe;
    std::string output_dir = "out";
    std::vector<uint64_t> seeds{1, 2, 3};

    // Model selection (ground-state tasks and eig).
    int n = 0;
    std::string model;  // H1 | H2 | H3 | spin | file
    std::string hamiltonian_file;
    double Jx = 0, Jy = 0, Jz = 0, hx = 0, hy = 0, hz = 0;

    // Shared hyperparameters.
    int m = 3;
    int rounds = 3;      // T
    int vqe_layers = 2;  // L_u
    double lr = 0.0;     // 0 means per-task default
    int iterations = 0;  // 0 means per-task default
    double reset_q = 1.0;

    // Circuit noise.
    std::string noise = "none";  // none | DP | BF | AD
    double noise_p = 0.0;
    std::string noise_location = "fully_noisy";

    // Recovery task.
    std::string target;  // W | plus | DC
    std::string prep_noise = "DP";
    double prep_noise_p = 0.1;
    int dc_depth = 3;
    double dc_angle = M_PI / 4.0;

    // Scans and diagnostics.
    std::string base;  // dvqe | recover
    std::vector<ScanValue> scan_m, scan_T, scan_p;
    int diag_samples = 20;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);

std::string task_name(Task task);

// Materialize engine configs from a run config (optionally overriding the
// scanned quantity). The noise strings are resolved to NoiseSpec here.
DvqeConfig to_dvqe_config(const RunConfig& cfg, uint64_t seed);
RecoveryConfig to_recovery_config(const RunConfig& cfg, uint64_t seed);
PauliHamiltonian resolve_hamiltonian(const RunConfig& cfg);
PureState resolve_target(const RunConfig& cfg);
NoiseSpec resolve_noise(const std::string& kind, double p, const std::string& location);

}  // namespace dissim
