// The two task pipelines: dissipative ground-state search and dissipative
// state recovery. Both alternate trainable blocks with ancilla attach/trace
// steps and expose themselves as differentiable losses over one flat
// parameter vector.
#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "dissim/circuits.hpp"
#include "dissim/hamiltonian.hpp"
#include "dissim/loss.hpp"

namespace dissim {

struct DvqeConfig {
    int n = 2;
    int m = 1;
    int rounds = 1;      // dissipative rounds T; 0 reduces to plain VQE
    int vqe_layers = 2;  // L_u
    PauliHamiltonian hamiltonian;
    NoiseSpec noise;
    uint64_t seed = 1;
    double learning_rate = 0.2;
    int iterations = 200;
};

struct RecoveryConfig {
    int n = 3;
    int m = 3;
    int rounds = 3;  // T
    PureState target;
    NoiseSpec noise_prep;  // applied once to every qubit of the ideal target
    NoiseSpec noise_run;   // per-gate noise inside the dissipative blocks
    uint64_t seed = 1;
    double learning_rate = 0.8;
    int iterations = 150;
};

void validate(const DvqeConfig& cfg);
void validate(const RecoveryConfig& cfg);

int dvqe_param_count(const DvqeConfig& cfg);
int recovery_param_count(const RecoveryConfig& cfg);

// Per-iteration training record plus run metadata.
struct TraceRow {
    int iteration = 0;
    double loss = 0.0;
    double aux_metric = 0.0;  // energy for ground-state search, fidelity for recovery
    double grad_norm = 0.0;
    std::vector<double> monitor_values;
};

struct TrainingTrace {
    std::vector<TraceRow> rows;
    std::vector<std::string> monitor_names;
    double final_loss = 0.0;
    std::vector<double> final_params;
    std::string config_echo;
    bool aborted = false;
    std::string abort_reason;
};

// One dissipative round: attach fresh |0> ancillas, run the block circuit
// (noise injected per gate when the spec is enabled), trace the ancillas back
// out.
DensityMatrix dissipative_round(const DensityMatrix& rho_s, const ParamCircuit& block,
                                std::span<const double> theta, const NoiseSpec& noise, int m);

// Differentiable pipeline loss. value() records the state in front of every
// parameterized gate so that value_shifted() can resume mid-pipeline instead
// of replaying the whole circuit.
class PipelineLoss : public ShiftableLoss {
  public:
    static PipelineLoss dvqe(const DvqeConfig& cfg);
    static PipelineLoss recovery(const RecoveryConfig& cfg);

    size_t param_count() const override { return param_count_; }
    double value(std::span<const double> theta) override;
    double value_shifted(std::span<const double> theta, size_t k, double delta) const override;

    // Full evaluation returning the final system state; validates the output.
    std::pair<double, DensityMatrix> forward(std::span<const double> theta) const;

    bool is_energy_task() const { return is_dvqe_; }

  protected:
    double evaluate(std::span<const double> theta) const override;

  private:
    // In the fully noisy setting, noise enters once per block application as a
    // layer of single-qubit channels on the block's whole register (a noise
    // op following the block's gates), not per gate.
    struct Op {
        enum class Kind { gate, attach, detach, noise } kind = Kind::gate;
        Gate gate;
        int width = 0;  // register qubit count while this op runs
    };

    PipelineLoss() = default;
    void build_dvqe(const DvqeConfig& cfg);
    void build_recovery(const RecoveryConfig& cfg);
    void index_params();
    double run(std::span<const double> theta, size_t start_op, CMatrix rho,
               size_t shift_k, double shift_delta, bool record) const;
    double loss_of(const CMatrix& rho) const;

    std::vector<Op> ops_;
    int n_ = 0;
    int m_ = 0;
    size_t param_count_ = 0;
    bool is_dvqe_ = false;
    CMatrix h_dense_;
    PureState target_;
    NoiseSpec block_noise_;
    CMatrix input_;  // prepared initial system state

    std::vector<size_t> param_op_;  // parameter index -> op position
    // Prefix cache, rebuilt by value(); read-only for value_shifted.
    mutable std::vector<double> cached_theta_;
    mutable std::vector<CMatrix> checkpoints_;
};

std::pair<double, DensityMatrix> dvqe_forward(const DvqeConfig& cfg,
                                              std::span<const double> theta);
std::pair<double, DensityMatrix> recovery_forward(const RecoveryConfig& cfg,
                                                  std::span<const double> theta);

PipelineLoss make_loss(const DvqeConfig& cfg);
PipelineLoss make_loss(const RecoveryConfig& cfg);

}  // namespace dissim
