#include "dissim/runner.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "dissim/diagnostics.hpp"
#include "dissim/optim.hpp"

namespace dissim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

struct SubRun {
    std::string variant;
    uint64_t seed = 0;
    TrainingTrace trace;
    double reference = 0.0;   // E0 for energy tasks, F0 for recovery
    double final_metric = 0.0;
    bool energy_task = true;
    std::string trace_file;
    double wall_seconds = 0.0;
};

struct RunState {
    std::vector<SubRun> runs;
    std::vector<std::string> errors;
    std::vector<std::string> files;
    ordered_json extra;  // task-specific summary entries
};

double input_fidelity_of(const RecoveryConfig& cfg) {
    DensityMatrix input = projector(cfg.target);
    if (cfg.noise_prep.enabled()) {
        std::vector<int> all(cfg.n);
        for (int q = 0; q < cfg.n; ++q) all[q] = q;
        input = inject_noise(input, cfg.noise_prep, all);
    }
    return fidelity_pure(input, cfg.target);
}

// One training execution; exceptions propagate to the caller's error list.
SubRun execute(const RunConfig& run_cfg, const std::string& variant, uint64_t seed,
               const RunConfig& effective) {
    SubRun sub;
    sub.variant = variant;
    sub.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    TrainOptions opts;
    opts.config_echo = serialize_config(run_cfg);
    if (effective.task == Task::recover ||
        ((effective.task != Task::dvqe) && effective.base == "recover")) {
        const RecoveryConfig cfg = to_recovery_config(effective, seed);
        validate(cfg);
        sub.energy_task = false;
        sub.reference = input_fidelity_of(cfg);
        opts.aux_from_loss = [](double l) { return 1.0 - l; };
        PipelineLoss loss = make_loss(cfg);
        sub.trace = train(loss, init_params(loss.param_count(), seed), cfg.learning_rate,
                          cfg.iterations, opts);
        sub.final_metric = 1.0 - sub.trace.final_loss;
    } else {
        const DvqeConfig cfg = to_dvqe_config(effective, seed);
        validate(cfg);
        sub.energy_task = true;
        sub.reference = ground_energy(cfg.hamiltonian).energy;
        PipelineLoss loss = make_loss(cfg);
        sub.trace = train(loss, init_params(loss.param_count(), seed), cfg.learning_rate,
                          cfg.iterations, opts);
        sub.final_metric = sub.trace.final_loss;
    }
    sub.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0).count();
    return sub;
}

std::string summary_csv(const RunConfig& cfg, const std::vector<SubRun>& runs) {
    std::string out = "task,variant,seed,final_loss,final_metric,reference,delta\n";
    for (const SubRun& r : runs) {
        out += task_name(cfg.task);
        out += ',' + r.variant + ',' + std::to_string(r.seed) + ',' + fmt(r.trace.final_loss) +
               ',' + fmt(r.final_metric) + ',' + fmt(r.reference) + ',' +
               fmt(r.final_metric - r.reference) + '\n';
    }
    return out;
}

std::string timing_csv(const std::vector<SubRun>& runs) {
    std::string out = "variant,seed,wall_seconds\n";
    char buf[64];
    for (const SubRun& r : runs) {
        std::snprintf(buf, sizeof(buf), "%.3f", r.wall_seconds);
        out += r.variant + ',' + std::to_string(r.seed) + ',' + buf + '\n';
    }
    return out;
}

}  // namespace

std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
    std::filesystem::path dir = cfg.output_dir;
    if (const char* root = std::getenv(kOutputRootEnv); root && *root)
        dir = std::filesystem::path(root) / dir;
    return dir;
}

std::string trace_to_csv(const TrainingTrace& trace, bool energy_task, double reference) {
    std::string out = "iteration,loss,energy_or_fidelity,gap_to_E0_or_infidelity,grad_norm";
    for (const std::string& name : trace.monitor_names) out += ',' + name;
    out += '\n';
    for (const TraceRow& row : trace.rows) {
        const double metric = energy_task ? row.loss : 1.0 - row.loss;
        const double gap = energy_task ? row.loss - reference : row.loss;
        out += std::to_string(row.iteration) + ',' + fmt(row.loss) + ',' + fmt(metric) + ',' +
               fmt(gap) + ',' + fmt(row.grad_norm);
        for (double v : row.monitor_values) out += ',' + fmt(v);
        out += '\n';
    }
    return out;
}

int run(const RunConfig& cfg) {
    const std::filesystem::path dir = resolve_output_dir(cfg);
    std::filesystem::create_directories(dir);
    RunState state;

    // (variant, seed, effective-config) triples for the training tasks.
    struct Job {
        std::string variant;
        uint64_t seed;
        RunConfig effective;
    };
    std::vector<Job> jobs;
    if (cfg.task == Task::dvqe || cfg.task == Task::recover || cfg.task == Task::diag) {
        for (uint64_t seed : cfg.seeds) jobs.push_back({task_name(cfg.task), seed, cfg});
        if (cfg.task == Task::diag)
            for (Job& j : jobs) j.variant = "diag_" + cfg.base;
    } else if (cfg.task == Task::scan_ancilla) {
        for (const ScanValue& sv : cfg.scan_m)
            for (uint64_t seed : cfg.seeds) {
                RunConfig eff = cfg;
                eff.m = static_cast<int>(sv.value);
                if (eff.m == 0) eff.rounds = 0;  // ancilla-free baseline is plain VQE
                jobs.push_back({sv.label, seed, eff});
            }
    } else if (cfg.task == Task::scan_rounds) {
        for (const ScanValue& sv : cfg.scan_T)
            for (uint64_t seed : cfg.seeds) {
                RunConfig eff = cfg;
                eff.rounds = static_cast<int>(sv.value);
                if (eff.rounds == 0) eff.m = 0;
                jobs.push_back({sv.label, seed, eff});
            }
    } else if (cfg.task == Task::scan_noise) {
        for (const ScanValue& sv : cfg.scan_p)
            for (uint64_t seed : cfg.seeds) {
                RunConfig eff = cfg;
                if (cfg.base == "recover")
                    eff.prep_noise_p = sv.value;
                else
                    eff.noise_p = sv.value;
                jobs.push_back({sv.label, seed, eff});
            }
    }

    if (cfg.task == Task::eig) {
        try {
            const PauliHamiltonian h = resolve_hamiltonian(cfg);
            const GroundState g = ground_energy(h);
            ordered_json summary;
            summary["task"] = "eig";
            summary["model"] = cfg.model;
            summary["n"] = h.qubit_count;
            summary["term_count"] = h.terms.size();
            summary["e0"] = g.energy;
            write_file(dir / "summary.json", summary.dump(2) + "\n");
            state.files.push_back("summary.json");
        } catch (const std::exception& e) {
            state.errors.push_back(e.what());
        }
    }

    for (const Job& job : jobs) {
        try {
            SubRun sub = execute(cfg, job.variant, job.seed, job.effective);
            sub.trace_file = "trace_" + sub.variant + "_seed" + std::to_string(sub.seed) + ".csv";
            write_file(dir / sub.trace_file,
                       trace_to_csv(sub.trace, sub.energy_task, sub.reference));
            state.files.push_back(sub.trace_file);
            if (sub.trace.aborted)
                state.errors.push_back(sub.variant + " seed " + std::to_string(sub.seed) + ": " +
                                       sub.trace.abort_reason);
            state.runs.push_back(std::move(sub));
        } catch (const std::exception& e) {
            state.errors.push_back(job.variant + " seed " + std::to_string(job.seed) + ": " +
                                   e.what());
        }
    }

    if (!jobs.empty()) {
        write_file(dir / "summary.csv", summary_csv(cfg, state.runs));
        write_file(dir / "timing.csv", timing_csv(state.runs));
        state.files.push_back("summary.csv");
    }

    if (cfg.task == Task::diag) {
        for (const SubRun& sub : state.runs) {
            try {
                ordered_json report;
                report["task"] = "diag";
                report["base"] = cfg.base;
                report["seed"] = sub.seed;
                double c_star = 0.0;
                std::string gap_note = "recovery loss optimum is 0";
                if (cfg.base == "dvqe") {
                    c_star = sub.reference;
                    gap_note = resolve_noise(cfg.noise, cfg.noise_p, cfg.noise_location).enabled()
                                    ? "noisy run: gap lower-bounded by E0, the channel-"
                                      "constrained optimum is unknown"
                                    : "noiseless run: gap measured against E0";
                }
                const PlReport pl = pl_ratio(sub.trace, c_star);
                report["c_star"] = c_star;
                report["gap_note"] = gap_note;
                report["pl_ratio_min"] = pl.min_ratio;
                report["pl_ratio_median"] = pl.median_ratio;
                report["eps_gap"] = pl.eps_gap;
                report["descent_fraction"] = descent_check(sub.trace, cfg.lr);
                {
                    RunConfig eff = cfg;
                    GradNormStats stats;
                    if (cfg.base == "recover") {
                        PipelineLoss loss = make_loss(to_recovery_config(eff, sub.seed));
                        stats = grad_norm_at_init(loss, cfg.diag_samples, sub.seed);
                    } else {
                        PipelineLoss loss = make_loss(to_dvqe_config(eff, sub.seed));
                        stats = grad_norm_at_init(loss, cfg.diag_samples, sub.seed);
                    }
                    report["init_grad_norm_sq_mean"] = stats.mean;
                    report["init_grad_norm_sq_variance"] = stats.variance;
                    report["init_grad_samples"] = stats.samples;
                }
                const std::string name = "diag_report_seed" + std::to_string(sub.seed) + ".json";
                write_file(dir / name, report.dump(2) + "\n");
                state.files.push_back(name);
            } catch (const std::exception& e) {
                state.errors.push_back("diag seed " + std::to_string(sub.seed) + ": " + e.what());
            }
        }
    }

    if (cfg.task == Task::scan_ancilla && cfg.base == "recover" && !state.runs.empty()) {
        // Per-m medians and gains over the uncorrected input fidelity.
        ordered_json scan = ordered_json::array();
        for (const ScanValue& sv : cfg.scan_m) {
            std::vector<double> finals;
            double reference = 0.0;
            for (const SubRun& r : state.runs)
                if (r.variant == sv.label) {
                    finals.push_back(r.final_metric);
                    reference = r.reference;
                }
            if (finals.empty()) continue;
            ordered_json row;
            row["m"] = static_cast<int>(sv.value);
            row["median_final_fidelity"] = median(finals);
            row["input_fidelity"] = reference;
            row["gain"] = median(finals) - reference;
            scan.push_back(row);
        }
        state.extra["saturation"] = scan;
    }

    ordered_json manifest;
    manifest["task"] = task_name(cfg.task);
    manifest["status"] = state.errors.empty() ? "ok" : "error";
    manifest["config"] = serialize_config(cfg);
    manifest["runs"] = ordered_json::array();
    for (const SubRun& r : state.runs) {
        ordered_json entry;
        entry["variant"] = r.variant;
        entry["seed"] = r.seed;
        entry["trace_file"] = r.trace_file;
        entry["reference"] = r.reference;
        entry["final_metric"] = r.final_metric;
        entry["aborted"] = r.trace.aborted;
        if (r.trace.aborted) entry["abort_reason"] = r.trace.abort_reason;
        entry["final_params"] = r.trace.final_params;
        manifest["runs"].push_back(entry);
    }
    if (!state.extra.empty())
        for (auto& [key, value] : state.extra.items()) manifest[key] = value;
    manifest["errors"] = state.errors;
    std::sort(state.files.begin(), state.files.end());
    manifest["files"] = state.files;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    return state.errors.empty() ? 0 : 1;
}

}  // namespace dissim
