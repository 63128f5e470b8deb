// Acceptance suite: property checks that must always hold, the desk-scale
// benchmark reproductions, and the determinism gate. Each criterion prints a
// single PASS/FAIL line with its measured numbers; the exit code is the number
// of failed criteria.
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dissim/diagnostics.hpp"
#include "dissim/optim.hpp"
#include "dissim/runner.hpp"
#include "testutil.hpp"

using namespace dissim;
using testutil::Rng;

namespace {

bool report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str());
    std::fflush(stdout);
    return pass;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::vector<double> random_theta(Rng& rng, size_t count) {
    std::vector<double> theta(count);
    for (auto& t : theta) t = rng.uniform(-M_PI, M_PI);
    return theta;
}

// --- criterion 1: CPTP outputs of random dissipative blocks ---------------
bool criterion_cptp() {
    Rng rng(1001);
    double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = rng.integer(1, 3);
        const int m = rng.integer(1, 3);
        const ParamCircuit block = build_dissipative_block(n, m, 0);
        const std::vector<double> theta = random_theta(rng, block.param_count);
        const DensityMatrix rho_in{RegisterShape::qubits(n),
                                   testutil::random_density(rng, 1 << n)};
        const DensityMatrix out = dissipative_round(rho_in, block, theta, NoiseSpec::off(), m);

        worst_trace = std::max(worst_trace, std::abs(trace(out.mat).real() - 1.0));
        worst_trace = std::max(worst_trace, std::abs(trace(out.mat).imag()));
        double herm = 0.0;
        for (int i = 0; i < out.mat.rows; ++i)
            for (int j = 0; j < out.mat.cols; ++j)
                herm = std::max(herm,
                                std::abs(out.mat.at(i, j) - std::conj(out.mat.at(j, i))));
        worst_herm = std::max(worst_herm, herm);
        worst_eig = std::min(worst_eig, min_eigenvalue(out.mat));
    }
    const bool pass = worst_trace <= 1e-10 && worst_herm <= 1e-10 && worst_eig >= -1e-9;
    return report(1, "CPTP outputs", pass,
                  "200 random blocks, worst |trace-1| = " + fmt(worst_trace) +
                      ", worst Hermiticity = " + fmt(worst_herm) +
                      ", min eigenvalue = " + fmt(worst_eig));
}

// --- criterion 2: Stinespring and Kraus routes agree -----------------------
bool criterion_representations() {
    Rng rng(1002);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.integer(1, 2);
        const int m = rng.integer(1, 2);
        const CMatrix v = testutil::random_unitary(rng, 1 << (n + m));
        const DensityMatrix rho{RegisterShape::qubits(n), testutil::random_density(rng, 1 << n)};
        const DensityMatrix via_dilation = stinespring_apply(v, rho, m);
        std::vector<int> targets(n);
        for (int q = 0; q < n; ++q) targets[q] = q;
        const DensityMatrix via_kraus =
            apply_kraus(kraus_from_stinespring(v, n, m), rho, targets);
        worst = std::max(worst, max_abs_diff(via_dilation.mat, via_kraus.mat));
    }
    return report(2, "representation equivalence", worst <= 1e-10,
                  "100 random dilations, worst deviation = " + fmt(worst));
}

// --- criterion 3: variational bound ----------------------------------------
bool criterion_variational_bound() {
    Rng rng(1003);
    double worst_margin = 1e9;
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        DvqeConfig cfg;
        cfg.n = rng.integer(2, 4);
        const BenchmarkModels models = benchmark_models(cfg.n);
        cfg.hamiltonian = trial % 3 == 0 ? models.h1 : trial % 3 == 1 ? models.h2 : models.h3;
        cfg.m = rng.integer(1, 2);
        cfg.rounds = rng.integer(0, 1);
        cfg.vqe_layers = 2;
        if (trial % 2 == 1)
            cfg.noise = {NoiseKind::depolarizing, rng.uniform(0.0, 0.15),
                         NoiseLocation::fully_noisy};
        const double e0 = ground_energy(cfg.hamiltonian).energy;
        PipelineLoss loss = make_loss(cfg);
        const std::vector<double> theta = random_theta(rng, loss.param_count());
        const double value = loss.value(theta);
        worst_margin = std::min(worst_margin, value - e0);
        ++checked;
    }
    return report(3, "variational bound", worst_margin >= -1e-9,
                  std::to_string(checked) + " random configurations, min(loss - E0) = " +
                      fmt(worst_margin));
}

// --- criterion 4: parameter-shift vs finite differences --------------------
bool criterion_gradients() {
    Rng rng(1004);
    const double h = 1e-5;
    double worst = 0.0;
    auto check_instance = [&](ShiftableLoss& loss) {
        const std::vector<double> theta = random_theta(rng, loss.param_count());
        const std::vector<double> grad = gradient_param_shift(loss, theta);
        for (size_t k = 0; k < theta.size(); ++k) {
            const double fd =
                (loss.value_shifted(theta, k, h) - loss.value_shifted(theta, k, -h)) /
                (2.0 * h);
            const double err = std::abs(grad[k] - fd) /
                               std::max(1.0, std::max(std::abs(grad[k]), std::abs(fd)));
            worst = std::max(worst, err);
        }
    };
    for (int trial = 0; trial < 20; ++trial) {
        DvqeConfig cfg;
        cfg.n = 2;
        cfg.m = 1;
        cfg.rounds = 1;
        cfg.vqe_layers = 1;
        cfg.hamiltonian = benchmark_models(2).h1;
        if (trial % 2 == 1)
            cfg.noise = {NoiseKind::amplitude_damping, 0.1, NoiseLocation::fully_noisy};
        PipelineLoss loss = make_loss(cfg);
        check_instance(loss);
    }
    for (int trial = 0; trial < 20; ++trial) {
        RecoveryConfig cfg;
        cfg.n = 2;
        cfg.m = 1;
        cfg.rounds = 1;
        cfg.target = trial % 2 == 0 ? w_state(2) : plus_state(2);
        cfg.noise_prep = {NoiseKind::depolarizing, 0.1, NoiseLocation::input_only};
        PipelineLoss loss = make_loss(cfg);
        check_instance(loss);
    }
    return report(4, "gradient correctness", worst <= 1e-6,
                  "20 instances per task, worst normalized deviation = " + fmt(worst));
}

// --- criterion 5: state-vector oracle for noiseless T=0 --------------------
bool criterion_oracle() {
    Rng rng(1005);
    double worst = 0.0;
    for (int n = 2; n <= 4; ++n) {
        DvqeConfig cfg;
        cfg.n = n;
        cfg.m = 0;
        cfg.rounds = 0;
        cfg.vqe_layers = 2;
        cfg.hamiltonian = benchmark_models(n).h1;
        const CMatrix h_dense = to_dense(cfg.hamiltonian);
        const ParamCircuit block = build_vqe_block(n, 2, 0);
        for (int trial = 0; trial < 25; ++trial) {
            const std::vector<double> theta = random_theta(rng, dvqe_param_count(cfg));
            const double loss = dvqe_forward(cfg, theta).first;
            std::vector<complexd> psi(1 << n, 0.0);
            psi[0] = 1.0;
            for (const Gate& g : block.gates) {
                const std::optional<double> angle =
                    is_rotation(g.kind) ? std::optional<double>(theta[g.param_index])
                                        : std::nullopt;
                psi = testutil::sv_apply(gate_matrix(g, angle), g.targets, n, psi);
            }
            const double oracle = quadratic_form(psi, h_dense).real();
            worst = std::max(worst, std::abs(loss - oracle));
        }
    }
    return report(5, "state-vector oracle", worst <= 1e-10,
                  "75 noiseless T=0 instances (n = 2..4), worst |loss - oracle| = " +
                      fmt(worst));
}

// --- shared runners for the benchmark criteria -----------------------------
struct RecoveryOutcome {
    double final_fidelity = 0.0;
    double best_by_100 = 0.0;
};

RecoveryOutcome run_recovery(const PureState& target, int n, int m, uint64_t seed,
                             int iterations) {
    RecoveryConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.rounds = 3;
    cfg.target = target;
    cfg.noise_prep = {NoiseKind::depolarizing, 0.1, NoiseLocation::input_only};
    cfg.learning_rate = 0.8;
    cfg.iterations = iterations;
    cfg.seed = seed;
    PipelineLoss loss = make_loss(cfg);
    TrainOptions opts;
    opts.aux_from_loss = [](double l) { return 1.0 - l; };
    const TrainingTrace trace = train(loss, init_params(loss.param_count(), seed),
                                      cfg.learning_rate, cfg.iterations, opts);
    RecoveryOutcome out;
    out.final_fidelity = 1.0 - trace.final_loss;
    for (const TraceRow& row : trace.rows)
        if (row.iteration <= 100) out.best_by_100 = std::max(out.best_by_100, row.aux_metric);
    return out;
}

double input_fidelity(const PureState& target, int n) {
    DensityMatrix input = projector(target);
    std::vector<int> all(n);
    for (int q = 0; q < n; ++q) all[q] = q;
    input = inject_noise(input, {NoiseKind::depolarizing, 0.1, NoiseLocation::input_only}, all);
    return fidelity_pure(input, target);
}

double run_dvqe_final_energy(int m, double p, NoiseLocation where, uint64_t seed,
                             int iterations) {
    DvqeConfig cfg;
    cfg.n = 3;
    cfg.m = m;
    cfg.rounds = m == 0 ? 0 : 1;
    cfg.vqe_layers = 2;
    cfg.hamiltonian = benchmark_models(3).h1;
    if (p > 0.0) cfg.noise = {NoiseKind::depolarizing, p, where};
    cfg.learning_rate = 0.2;
    cfg.iterations = iterations;
    cfg.seed = seed;
    PipelineLoss loss = make_loss(cfg);
    const TrainingTrace trace = train(loss, init_params(loss.param_count(), seed),
                                      cfg.learning_rate, cfg.iterations);
    return trace.final_loss;
}

// --- criterion 6: recovery headline ----------------------------------------
bool criterion_recovery_headline() {
    const int n = 3;
    struct TargetCase {
        const char* name;
        PureState state;
    };
    std::vector<std::vector<double>> dc_angles(3, std::vector<double>(n, M_PI / 4.0));
    const TargetCase cases[] = {{"W", w_state(n)},
                                {"plus", plus_state(n)},
                                {"DC", dressed_cluster_state(n, 3, dc_angles)}};
    bool all_pass = true;
    std::string detail;
    for (const TargetCase& tc : cases) {
        std::vector<double> finals;
        double best_single_by_100 = 0.0;
        for (uint64_t seed : {1, 2, 3}) {
            const RecoveryOutcome out = run_recovery(tc.state, n, 3, seed, 150);
            finals.push_back(out.final_fidelity);
            best_single_by_100 = std::max(best_single_by_100, out.best_by_100);
        }
        const double med = median(finals);
        const double f0 = input_fidelity(tc.state, n);
        const bool primary = med >= 0.99 && best_single_by_100 >= 0.99;
        const bool fallback = med >= 0.95 && (med - f0) >= 0.15;
        if (!primary && !fallback) all_pass = false;
        detail += std::string(tc.name) + ": median " + fmt(med) + " (F0 " + fmt(f0) +
                  ", best fidelity by iteration 100 " + fmt(best_single_by_100) +
                  (primary ? ", primary)"
                           : fallback ? ", fallback: trend holds, documented deviation)"
                                      : ", FAILED)") +
                  "  ";
    }
    return report(6, "recovery headline", all_pass, detail);
}

// --- criterion 7: ancilla monotonicity --------------------------------------
// Noise on the system-only variational blocks, the setting of the ancilla
// benchmark; the fully noisy setting enters in criterion 9.
bool criterion_ancilla_monotonicity() {
    const int ms[] = {0, 1, 3, 5};
    std::vector<double> medians;
    std::string detail = "median final energies:";
    for (int m : ms) {
        std::vector<double> finals;
        for (uint64_t seed : {1, 2, 3})
            finals.push_back(
                run_dvqe_final_energy(m, 0.1, NoiseLocation::system_only, seed, 200));
        medians.push_back(median(finals));
        detail += " m=" + std::to_string(m) + ": " + fmt(medians.back());
    }
    bool pass = true;
    for (size_t i = 0; i + 1 < medians.size(); ++i)
        if (medians[i + 1] > medians[i] + 0.02) pass = false;
    detail += " (E0 = " + fmt(ground_energy(benchmark_models(3).h1).energy) + ")";
    return report(7, "ancilla monotonicity", pass, detail);
}

// --- criterion 8: ancilla saturation ----------------------------------------
bool criterion_saturation() {
    RecoveryConfig base;
    base.n = 3;
    base.rounds = 3;
    base.target = w_state(3);
    base.noise_prep = {NoiseKind::depolarizing, 0.1, NoiseLocation::input_only};
    base.learning_rate = 0.8;
    base.iterations = 150;
    const std::vector<int> ms{1, 2, 3, 4};
    const std::vector<uint64_t> seeds{1, 2, 3};
    const SaturationScan scan = ancilla_scan(base, ms, seeds);
    std::string detail = "gains:";
    for (size_t i = 0; i < scan.m_values.size(); ++i)
        detail += " m=" + std::to_string(scan.m_values[i]) + ": " + fmt(scan.gain[i]);
    const double gap = std::abs(scan.gain[1] - scan.gain[3]);  // m=2 vs m=4
    detail += "  |gain(2)-gain(4)| = " + fmt(gap);
    return report(8, "ancilla saturation", gap <= 0.02, detail);
}

// --- criterion 9: noise-robustness ordering ----------------------------------
bool criterion_noise_ordering() {
    const double e0 = ground_energy(benchmark_models(3).h1).energy;
    const double ps[] = {0.01, 0.05, 0.1};
    std::vector<double> base_gaps, dis_gaps;
    std::string detail;
    for (double p : ps) {
        std::vector<double> base_f, dis_f;
        for (uint64_t seed : {1, 2, 3}) {
            base_f.push_back(
                run_dvqe_final_energy(0, p, NoiseLocation::fully_noisy, seed, 200));
            dis_f.push_back(
                run_dvqe_final_energy(5, p, NoiseLocation::fully_noisy, seed, 200));
        }
        base_gaps.push_back(median(base_f) - e0);
        dis_gaps.push_back(median(dis_f) - e0);
        detail += "p=" + fmt(p) + ": baseline gap " + fmt(base_gaps.back()) + ", m=5 gap " +
                  fmt(dis_gaps.back()) + "  ";
    }
    // Both comparisons are 3-seed medians judged at the criterion's 0.01
    // tolerance: the baseline gap must grow with p, and the dissipative gap
    // must not exceed the baseline gap at any p.
    bool pass = true;
    for (size_t i = 0; i + 1 < base_gaps.size(); ++i)
        if (base_gaps[i + 1] < base_gaps[i] - 0.01) pass = false;
    for (size_t i = 0; i < base_gaps.size(); ++i)
        if (dis_gaps[i] > base_gaps[i] + 0.01) pass = false;
    return report(9, "noise-robustness ordering", pass, detail);
}

// --- criterion 10: determinism ----------------------------------------------
bool criterion_determinism() {
    namespace fs = std::filesystem;
    const std::string cfg_text =
        "task = recover\n"
        "n = 3\n"
        "m = 3\n"
        "rounds = 3\n"
        "lr = 0.8\n"
        "iterations = 150\n"
        "target = W\n"
        "prep_noise = DP\n"
        "prep_noise_p = 0.1\n"
        "seeds = 1\n";
    auto run_into = [&](const std::string& dir) {
        fs::remove_all(dir);
        RunConfig cfg = parse_config(cfg_text + "output_dir = " + dir + "\n");
        return run(cfg);
    };
    const int rc_a = run_into("acceptance_out/det_a");
    const int rc_b = run_into("acceptance_out/det_b");
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const std::string a = slurp("acceptance_out/det_a/trace_recover_seed1.csv");
    const std::string b = slurp("acceptance_out/det_b/trace_recover_seed1.csv");
    const std::string sa = slurp("acceptance_out/det_a/summary.csv");
    const std::string sb = slurp("acceptance_out/det_b/summary.csv");
    const bool pass = rc_a == 0 && rc_b == 0 && !a.empty() && a == b && sa == sb;
    return report(10, "determinism", pass,
                  "criterion-6 run repeated: trace CSVs " +
                      std::string(a == b ? "byte-identical" : "DIFFER") + " (" +
                      std::to_string(a.size()) + " bytes)");
}

// --- supplementary: diagnostics reports are produced, finite, deterministic --
bool criterion_diagnostics() {
    FunctionLoss bowl(
        3,
        [](std::span<const double> t) {
            double s = 0.0;
            for (double x : t) s += x * x;
            return s;
        },
        [](std::span<const double> t, std::span<double> g) {
            for (size_t k = 0; k < t.size(); ++k) g[k] = 2.0 * t[k];
        });
    const TrainingTrace bowl_trace = train(bowl, {1.0, -0.5, 2.0}, 0.25, 6);
    const PlReport bowl_pl = pl_ratio(bowl_trace, 0.0);
    bool pass = true;
    for (double r : bowl_pl.ratios)
        if (std::abs(r - 2.0) > 1e-12) pass = false;

    DvqeConfig cfg;
    cfg.n = 2;
    cfg.m = 1;
    cfg.rounds = 1;
    cfg.vqe_layers = 1;
    cfg.hamiltonian = benchmark_models(2).h1;
    cfg.noise = {NoiseKind::depolarizing, 0.05, NoiseLocation::fully_noisy};
    auto produce = [&] {
        PipelineLoss loss = make_loss(cfg);
        const TrainingTrace trace =
            train(loss, init_params(loss.param_count(), 1), 0.2, 10);
        const PlReport pl = pl_ratio(trace, ground_energy(cfg.hamiltonian).energy);
        const double descent = descent_check(trace, 0.2);
        PipelineLoss loss2 = make_loss(cfg);
        const GradNormStats stats = grad_norm_at_init(loss2, 5, 7);
        return std::tuple(pl.min_ratio, pl.median_ratio, descent, stats.mean, stats.variance);
    };
    const auto a = produce();
    const auto b = produce();
    const auto finite = [](double v) { return std::isfinite(v); };
    pass = pass && a == b && finite(std::get<0>(a)) && finite(std::get<1>(a)) &&
           finite(std::get<2>(a)) && finite(std::get<3>(a)) && finite(std::get<4>(a)) &&
           std::get<0>(a) >= 0.0;
    return report(11, "diagnostics reports", pass,
                  "bowl PL ratio = 2 exactly; task diagnostics finite and deterministic "
                  "(min PL " +
                      fmt(std::get<0>(a)) + ", descent fraction " + fmt(std::get<2>(a)) + ")");
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }
    struct Entry {
        int id;
        bool (*fn)();
    };
    const Entry entries[] = {
        {1, criterion_cptp},          {2, criterion_representations},
        {3, criterion_variational_bound}, {4, criterion_gradients},
        {5, criterion_oracle},        {6, criterion_recovery_headline},
        {7, criterion_ancilla_monotonicity}, {8, criterion_saturation},
        {9, criterion_noise_ordering},  {10, criterion_determinism},
        {11, criterion_diagnostics},
    };
    int failures = 0;
    for (const Entry& e : entries) {
        if (only != 0 && e.id != only) continue;
        try {
            if (!e.fn()) ++failures;
        } catch (const std::exception& ex) {
            std::printf("[FAIL] criterion %d: exception: %s\n", e.id, ex.what());
            ++failures;
        }
    }
    return failures;
}
