// Empirical optimization monitors: Polyak-Lojasiewicz ratios and per-step
// descent satisfaction along a trace, gradient-norm statistics at random
// initializations, and the ancilla saturation scan for the recovery task.
// These report numbers for inspection; none of them asserts theory.
#pragma once

#include <cstdint>

#include "dissim/engine.hpp"
#include "dissim/loss.hpp"

namespace dissim {

struct PlReport {
    std::vector<double> ratios;  // r_t = (0.5 |grad C|^2) / max(C - C*, eps_gap)
    double min_ratio = 0.0;      // empirical lower estimate of the PL constant
    double median_ratio = 0.0;
    double eps_gap = 1e-12;
    std::string gap_note;
};

PlReport pl_ratio(const TrainingTrace& trace, double c_star, double eps_gap = 1e-12);

// Fraction of steps with loss_t - loss_{t+1} >= (eta/2) |grad_t|^2 - 1e-12.
// Informative only: the bound presumes eta <= 1/beta, which is not verified.
double descent_check(const TrainingTrace& trace, double eta);

struct GradNormStats {
    double mean = 0.0;      // of |grad C|^2 over fresh initializations
    double variance = 0.0;  // unbiased sample variance
    int samples = 0;
};

GradNormStats grad_norm_at_init(ShiftableLoss& loss, int samples, uint64_t seed);

struct SaturationScan {
    std::vector<int> m_values;
    std::vector<double> final_metric;  // per-m median final fidelity over seeds
    std::vector<double> gain;          // final_metric - input fidelity
    double input_fidelity = 0.0;       // F_0 of the uncorrected noisy input
};

SaturationScan ancilla_scan(const RecoveryConfig& base, std::span<const int> m_values,
                            std::span<const uint64_t> seeds);

double median(std::vector<double> values);

}  // namespace dissim
