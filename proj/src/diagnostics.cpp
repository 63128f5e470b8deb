#include "dissim/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "dissim/channels.hpp"
#include "dissim/optim.hpp"

namespace dissim {

double median(std::vector<double> values) {
    if (values.empty()) throw ContractError("median of empty set");
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

PlReport pl_ratio(const TrainingTrace& trace, double c_star, double eps_gap) {
    PlReport report;
    report.eps_gap = eps_gap;
    for (const TraceRow& row : trace.rows) {
        const double gap = std::max(row.loss - c_star, eps_gap);
        report.ratios.push_back(0.5 * row.grad_norm * row.grad_norm / gap);
    }
    if (!report.ratios.empty()) {
        report.min_ratio = *std::min_element(report.ratios.begin(), report.ratios.end());
        report.median_ratio = median(report.ratios);
    }
    return report;
}

double descent_check(const TrainingTrace& trace, double eta) {
    if (eta <= 0.0) throw ContractError("descent_check: eta must be positive");
    if (trace.rows.size() < 2) return 1.0;
    size_t satisfied = 0;
    size_t steps = 0;
    for (size_t t = 0; t + 1 < trace.rows.size(); ++t) {
        const double decrease = trace.rows[t].loss - trace.rows[t + 1].loss;
        const double bound = 0.5 * eta * trace.rows[t].grad_norm * trace.rows[t].grad_norm;
        ++steps;
        if (decrease >= bound - 1e-12) ++satisfied;
    }
    return static_cast<double>(satisfied) / static_cast<double>(steps);
}

GradNormStats grad_norm_at_init(ShiftableLoss& loss, int samples, uint64_t seed) {
    if (samples < 2) throw ContractError("grad_norm_at_init: need at least 2 samples");
    std::vector<double> values;
    values.reserve(samples);
    for (int s = 0; s < samples; ++s) {
        const std::vector<double> theta =
            init_params(loss.param_count(), seed + static_cast<uint64_t>(s));
        const std::vector<double> grad = compute_gradient(loss, theta);
        double sq = 0.0;
        for (double g : grad) sq += g * g;
        values.push_back(sq);
    }
    GradNormStats stats;
    stats.samples = samples;
    for (double v : values) stats.mean += v;
    stats.mean /= samples;
    for (double v : values) stats.variance += (v - stats.mean) * (v - stats.mean);
    stats.variance /= samples - 1;
    return stats;
}

SaturationScan ancilla_scan(const RecoveryConfig& base, std::span<const int> m_values,
                            std::span<const uint64_t> seeds) {
    if (m_values.empty() || seeds.empty())
        throw ContractError("ancilla_scan: need at least one m value and one seed");
    for (size_t i = 0; i + 1 < m_values.size(); ++i)
        if (m_values[i] >= m_values[i + 1])
            throw ContractError("ancilla_scan: m values must be strictly increasing");

    SaturationScan scan;
    // F_0: fidelity of the uncorrected noisy input with the target.
    DensityMatrix input = projector(base.target);
    if (base.noise_prep.enabled()) {
        std::vector<int> all(base.n);
        for (int q = 0; q < base.n; ++q) all[q] = q;
        input = inject_noise(input, base.noise_prep, all);
    }
    scan.input_fidelity = fidelity_pure(input, base.target);

    for (int m : m_values) {
        RecoveryConfig cfg = base;
        cfg.m = m;
        std::vector<double> finals;
        for (uint64_t seed : seeds) {
            cfg.seed = seed;
            PipelineLoss loss = make_loss(cfg);
            const TrainingTrace trace =
                train(loss, init_params(loss.param_count(), seed), cfg.learning_rate,
                      cfg.iterations);
            finals.push_back(1.0 - trace.final_loss);
        }
        scan.m_values.push_back(m);
        scan.final_metric.push_back(median(finals));
        scan.gain.push_back(scan.final_metric.back() - scan.input_fidelity);
    }
    return scan;
}

}  // namespace dissim
