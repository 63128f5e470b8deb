#include "dissim/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dissim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

const std::set<std::string> kCommonKeys = {"task", "output_dir", "seeds"};
const std::set<std::string> kModelKeys = {"n",  "model", "hamiltonian_file", "Jx", "Jy",
                                          "Jz", "hx",    "hy",               "hz"};
const std::set<std::string> kHyperKeys = {"m",  "rounds",     "vqe_layers", "lr",
                                          "iterations", "reset_q"};
const std::set<std::string> kNoiseKeys = {"noise", "noise_p", "noise_location"};
const std::set<std::string> kRecoverKeys = {"target", "prep_noise", "prep_noise_p",
                                            "dc_depth", "dc_angle"};

bool key_allowed(Task task, const std::string& base, const std::string& key) {
    if (kCommonKeys.count(key)) return true;
    auto in = [&](const std::set<std::string>& s) { return s.count(key) > 0; };
    const bool dvqe_side = in(kModelKeys) || in(kHyperKeys) || in(kNoiseKeys);
    const bool recover_side =
        in(kRecoverKeys) || key == "n" || in(kHyperKeys) || in(kNoiseKeys);
    switch (task) {
        case Task::dvqe:
            return dvqe_side;
        case Task::recover:
            return recover_side;
        case Task::eig:
            return in(kModelKeys);
        case Task::scan_ancilla:
            if (key == "base" || key == "scan_m") return true;
            break;
        case Task::scan_rounds:
            if (key == "base" || key == "scan_T") return true;
            break;
        case Task::scan_noise:
            if (key == "base" || key == "scan_p") return true;
            break;
        case Task::diag:
            if (key == "base" || key == "diag_samples") return true;
            break;
    }
    if (task == Task::scan_ancilla || task == Task::scan_rounds || task == Task::scan_noise ||
        task == Task::diag) {
        if (base == "recover") return recover_side;
        if (base == "dvqe") return dvqe_side;
        return dvqe_side || recover_side;  // base not seen yet; checked later
    }
    return false;
}

double parse_double(const std::string& key, const std::string& value, int line) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ", field '" + key +
                          "': expected a number, got '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value, int line) {
    try {
        size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ", field '" + key +
                          "': expected an integer, got '" + value + "'");
    }
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string task_name(Task task) {
    switch (task) {
        case Task::dvqe: return "dvqe";
        case Task::recover: return "recover";
        case Task::scan_ancilla: return "scan_ancilla";
        case Task::scan_rounds: return "scan_rounds";
        case Task::scan_noise: return "scan_noise";
        case Task::eig: return "eig";
        case Task::diag: return "diag";
    }
    return "?";
}

RunConfig parse_config(const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> raw;  // key -> (value, line)
    {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
            if (raw.count(key))
                throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key +
                                  "'");
            raw[key] = {value, lineno};
        }
    }

    if (!raw.count("task")) throw ConfigError("missing required field 'task'");
    RunConfig cfg;
    {
        const std::string t = raw["task"].first;
        if (t == "dvqe") cfg.task = Task::dvqe;
        else if (t == "recover") cfg.task = Task::recover;
        else if (t == "scan_ancilla") cfg.task = Task::scan_ancilla;
        else if (t == "scan_rounds") cfg.task = Task::scan_rounds;
        else if (t == "scan_noise") cfg.task = Task::scan_noise;
        else if (t == "eig") cfg.task = Task::eig;
        else if (t == "diag") cfg.task = Task::diag;
        else
            throw ConfigError("line " + std::to_string(raw["task"].second) +
                              ", field 'task': unknown task '" + t + "'");
    }
    const std::string base_peek = raw.count("base") ? raw["base"].first : "";
    for (const auto& [key, vl] : raw)
        if (!key_allowed(cfg.task, base_peek, key))
            throw ConfigError("line " + std::to_string(vl.second) + ": key '" + key +
                              "' is not applicable to task '" + task_name(cfg.task) + "'");

    std::set<std::string> seen;
    auto has = [&](const char* key) { return raw.count(key) > 0; };
    auto str = [&](const char* key, std::string& out) {
        if (has(key)) {
            out = raw[key].first;
            seen.insert(key);
        }
    };
    auto num = [&](const char* key, double& out) {
        if (has(key)) {
            out = parse_double(key, raw[key].first, raw[key].second);
            seen.insert(key);
        }
    };
    auto integer = [&](const char* key, int& out) {
        if (has(key)) {
            out = parse_int(key, raw[key].first, raw[key].second);
            seen.insert(key);
        }
    };

    str("output_dir", cfg.output_dir);
    if (has("seeds")) {
        cfg.seeds.clear();
        for (const std::string& tok : split_list(raw["seeds"].first))
            cfg.seeds.push_back(
                static_cast<uint64_t>(parse_int("seeds", tok, raw["seeds"].second)));
        seen.insert("seeds");
    }
    integer("n", cfg.n);
    str("model", cfg.model);
    str("hamiltonian_file", cfg.hamiltonian_file);
    num("Jx", cfg.Jx);
    num("Jy", cfg.Jy);
    num("Jz", cfg.Jz);
    num("hx", cfg.hx);
    num("hy", cfg.hy);
    num("hz", cfg.hz);
    integer("m", cfg.m);
    integer("rounds", cfg.rounds);
    integer("vqe_layers", cfg.vqe_layers);
    num("lr", cfg.lr);
    integer("iterations", cfg.iterations);
    num("reset_q", cfg.reset_q);
    str("noise", cfg.noise);
    num("noise_p", cfg.noise_p);
    str("noise_location", cfg.noise_location);
    str("target", cfg.target);
    str("prep_noise", cfg.prep_noise);
    num("prep_noise_p", cfg.prep_noise_p);
    integer("dc_depth", cfg.dc_depth);
    num("dc_angle", cfg.dc_angle);
    str("base", cfg.base);
    integer("diag_samples", cfg.diag_samples);

    auto scan_list = [&](const char* key, std::vector<ScanValue>& out, bool integral,
                         const std::string& prefix) {
        if (!has(key)) return;
        for (const std::string& tok : split_list(raw[key].first)) {
            ScanValue sv;
            sv.value = integral ? parse_int(key, tok, raw[key].second)
                                : parse_double(key, tok, raw[key].second);
            sv.label = prefix + tok;
            out.push_back(sv);
        }
        seen.insert(key);
    };
    scan_list("scan_m", cfg.scan_m, true, "m");
    scan_list("scan_T", cfg.scan_T, true, "T");
    scan_list("scan_p", cfg.scan_p, false, "p");

    // Per-task defaults for the optimizer settings.
    const std::string effective_base =
        (cfg.task == Task::dvqe) ? "dvqe"
        : (cfg.task == Task::recover) ? "recover"
                                      : cfg.base;
    if (!seen.count("lr")) cfg.lr = effective_base == "recover" ? 0.8 : 0.2;
    if (!seen.count("iterations")) cfg.iterations = effective_base == "recover" ? 150 : 200;

    // Validation: collect every violated invariant.
    std::vector<std::string> bad;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };
    const bool needs_model = cfg.task == Task::dvqe || cfg.task == Task::eig ||
                             ((cfg.task == Task::scan_ancilla || cfg.task == Task::scan_rounds ||
                               cfg.task == Task::scan_noise || cfg.task == Task::diag) &&
                              cfg.base == "dvqe");
    const bool needs_target = cfg.task == Task::recover ||
                              ((cfg.task == Task::scan_ancilla || cfg.task == Task::scan_rounds ||
                                cfg.task == Task::scan_noise || cfg.task == Task::diag) &&
                               cfg.base == "recover");
    if (cfg.task == Task::scan_ancilla || cfg.task == Task::scan_rounds ||
        cfg.task == Task::scan_noise || cfg.task == Task::diag)
        require(cfg.base == "dvqe" || cfg.base == "recover",
                "base: must be 'dvqe' or 'recover' for scan and diag tasks");
    if (needs_model) {
        require(!cfg.model.empty(), "model: required (H1, H2, H3, spin, or file)");
        if (!cfg.model.empty())
            require(cfg.model == "H1" || cfg.model == "H2" || cfg.model == "H3" ||
                        cfg.model == "spin" || cfg.model == "file",
                    "model: unknown value '" + cfg.model + "'");
        if (cfg.model == "file")
            require(!cfg.hamiltonian_file.empty(), "hamiltonian_file: required for model=file");
        if (cfg.model != "file") require(cfg.n >= 2, "n: must be >= 2 for the spin models");
    }
    if (needs_target) {
        require(cfg.target == "W" || cfg.target == "plus" || cfg.target == "DC",
                "target: must be one of W, plus, DC");
        require(cfg.n >= (cfg.target == "plus" ? 1 : 2), "n: too small for the chosen target");
        require(cfg.prep_noise == "none" || cfg.prep_noise == "DP" || cfg.prep_noise == "BF" ||
                    cfg.prep_noise == "AD",
                "prep_noise: must be one of none, DP, BF, AD");
        require(cfg.prep_noise_p >= 0.0 && cfg.prep_noise_p <= 1.0,
                "prep_noise_p: must lie in [0,1]");
        require(cfg.dc_depth >= 0, "dc_depth: must be >= 0");
        require(cfg.rounds >= 1, "rounds: recovery needs at least one round");
        require(cfg.m >= 1, "m: recovery needs at least one ancilla");
    }
    require(!cfg.seeds.empty(), "seeds: must not be empty");
    require(cfg.lr > 0.0, "lr: must be positive");
    require(cfg.iterations >= 1, "iterations: must be >= 1");
    require(cfg.m >= 0, "m: must be >= 0");
    require(cfg.rounds >= 0, "rounds: must be >= 0");
    require(cfg.vqe_layers >= 1, "vqe_layers: must be >= 1");
    require(cfg.noise == "none" || cfg.noise == "DP" || cfg.noise == "BF" || cfg.noise == "AD",
            "noise: must be one of none, DP, BF, AD");
    require(cfg.noise_p >= 0.0 && cfg.noise_p <= 1.0, "noise_p: must lie in [0,1]");
    require(cfg.noise_location == "fully_noisy" || cfg.noise_location == "system_only" ||
                cfg.noise_location == "input_only",
            "noise_location: must be fully_noisy, system_only, or input_only");
    require(cfg.reset_q > 0.0 && cfg.reset_q <= 1.0, "reset_q: must lie in (0,1]");
    require(cfg.reset_q == 1.0,
            "reset_q: the training pipelines realize the ancilla reset by trace-out and "
            "re-tensoring, which is the q=1 reset; partial reset is available through the "
            "channel API only");
    if (cfg.task == Task::dvqe || (needs_model && cfg.task != Task::eig)) {
        require(cfg.rounds == 0 || cfg.m >= 1, "m: rounds >= 1 requires at least one ancilla");
    }
    if (cfg.task == Task::scan_ancilla) {
        require(!cfg.scan_m.empty(), "scan_m: required for scan_ancilla");
        for (size_t i = 0; i + 1 < cfg.scan_m.size(); ++i)
            require(cfg.scan_m[i].value < cfg.scan_m[i + 1].value,
                    "scan_m: values must be strictly increasing");
        for (const ScanValue& sv : cfg.scan_m)
            require(sv.value >= (cfg.base == "recover" ? 1 : 0), "scan_m: value out of range");
    }
    if (cfg.task == Task::scan_rounds) {
        require(!cfg.scan_T.empty(), "scan_T: required for scan_rounds");
        for (const ScanValue& sv : cfg.scan_T)
            require(sv.value >= (cfg.base == "recover" ? 1 : 0), "scan_T: value out of range");
    }
    if (cfg.task == Task::scan_noise) {
        require(!cfg.scan_p.empty(), "scan_p: required for scan_noise");
        for (const ScanValue& sv : cfg.scan_p)
            require(sv.value >= 0.0 && sv.value <= 1.0, "scan_p: values must lie in [0,1]");
    }
    if (cfg.task == Task::diag) require(cfg.diag_samples >= 2, "diag_samples: must be >= 2");

    if (!bad.empty()) {
        std::string msg = "invalid configuration:";
        for (const std::string& b : bad) msg += "\n  - " + b;
        throw ConfigError(msg);
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "task = " << task_name(cfg.task) << "\n";
    out << "output_dir = " << cfg.output_dir << "\n";
    out << "seeds = ";
    for (size_t i = 0; i < cfg.seeds.size(); ++i) out << (i ? "," : "") << cfg.seeds[i];
    out << "\n";
    const bool scanlike = cfg.task == Task::scan_ancilla || cfg.task == Task::scan_rounds ||
                           cfg.task == Task::scan_noise || cfg.task == Task::diag;
    const bool dvqe_side = cfg.task == Task::dvqe || cfg.task == Task::eig ||
                           (scanlike && cfg.base == "dvqe");
    const bool recover_side = cfg.task == Task::recover || (scanlike && cfg.base == "recover");
    if (scanlike) out << "base = " << cfg.base << "\n";
    if (dvqe_side) {
        out << "n = " << cfg.n << "\n";
        out << "model = " << cfg.model << "\n";
        if (cfg.model == "file") out << "hamiltonian_file = " << cfg.hamiltonian_file << "\n";
        if (cfg.model == "spin") {
            out << "Jx = " << fmt_double(cfg.Jx) << "\n";
            out << "Jy = " << fmt_double(cfg.Jy) << "\n";
            out << "Jz = " << fmt_double(cfg.Jz) << "\n";
            out << "hx = " << fmt_double(cfg.hx) << "\n";
            out << "hy = " << fmt_double(cfg.hy) << "\n";
            out << "hz = " << fmt_double(cfg.hz) << "\n";
        }
    }
    if (recover_side) {
        out << "n = " << cfg.n << "\n";
        out << "target = " << cfg.target << "\n";
        out << "prep_noise = " << cfg.prep_noise << "\n";
        out << "prep_noise_p = " << fmt_double(cfg.prep_noise_p) << "\n";
        if (cfg.target == "DC") {
            out << "dc_depth = " << cfg.dc_depth << "\n";
            out << "dc_angle = " << fmt_double(cfg.dc_angle) << "\n";
        }
    }
    if (cfg.task != Task::eig) {
        out << "m = " << cfg.m << "\n";
        out << "rounds = " << cfg.rounds << "\n";
        if (dvqe_side) out << "vqe_layers = " << cfg.vqe_layers << "\n";
        out << "lr = " << fmt_double(cfg.lr) << "\n";
        out << "iterations = " << cfg.iterations << "\n";
        out << "noise = " << cfg.noise << "\n";
        out << "noise_p = " << fmt_double(cfg.noise_p) << "\n";
        out << "noise_location = " << cfg.noise_location << "\n";
        out << "reset_q = " << fmt_double(cfg.reset_q) << "\n";
    }
    if (cfg.task == Task::scan_ancilla) {
        out << "scan_m = ";
        for (size_t i = 0; i < cfg.scan_m.size(); ++i)
            out << (i ? "," : "") << cfg.scan_m[i].label.substr(1);
        out << "\n";
    }
    if (cfg.task == Task::scan_rounds) {
        out << "scan_T = ";
        for (size_t i = 0; i < cfg.scan_T.size(); ++i)
            out << (i ? "," : "") << cfg.scan_T[i].label.substr(1);
        out << "\n";
    }
    if (cfg.task == Task::scan_noise) {
        out << "scan_p = ";
        for (size_t i = 0; i < cfg.scan_p.size(); ++i)
            out << (i ? "," : "") << cfg.scan_p[i].label.substr(1);
        out << "\n";
    }
    if (cfg.task == Task::diag) out << "diag_samples = " << cfg.diag_samples << "\n";
    return out.str();
}

PauliHamiltonian resolve_hamiltonian(const RunConfig& cfg) {
    if (cfg.model == "H1") return benchmark_models(cfg.n).h1;
    if (cfg.model == "H2") return benchmark_models(cfg.n).h2;
    if (cfg.model == "H3") return benchmark_models(cfg.n).h3;
    if (cfg.model == "spin")
        return build_spin_model({cfg.n, cfg.Jx, cfg.Jy, cfg.Jz, cfg.hx, cfg.hy, cfg.hz});
    if (cfg.model == "file") {
        std::ifstream in(cfg.hamiltonian_file);
        if (!in) throw ConfigError("cannot open hamiltonian file: " + cfg.hamiltonian_file);
        std::ostringstream text;
        text << in.rdbuf();
        PauliHamiltonian h = parse_pauli_text(text.str());
        if (cfg.n != 0 && cfg.n != h.qubit_count)
            throw ConfigError("hamiltonian file has " + std::to_string(h.qubit_count) +
                              " qubits but the config says n = " + std::to_string(cfg.n));
        return h;
    }
    throw ConfigError("no Hamiltonian model selected");
}

PureState resolve_target(const RunConfig& cfg) {
    if (cfg.target == "W") return w_state(cfg.n);
    if (cfg.target == "plus") return plus_state(cfg.n);
    if (cfg.target == "DC") {
        std::vector<std::vector<double>> angles(cfg.dc_depth,
                                                std::vector<double>(cfg.n, cfg.dc_angle));
        return dressed_cluster_state(cfg.n, cfg.dc_depth, angles);
    }
    throw ConfigError("no recovery target selected");
}

NoiseSpec resolve_noise(const std::string& kind, double p, const std::string& location) {
    NoiseSpec spec;
    if (kind == "none") spec.kind = NoiseKind::none;
    else if (kind == "DP") spec.kind = NoiseKind::depolarizing;
    else if (kind == "BF") spec.kind = NoiseKind::bit_flip;
    else if (kind == "AD") spec.kind = NoiseKind::amplitude_damping;
    else throw ConfigError("unknown noise kind '" + kind + "'");
    spec.strength = p;
    if (location == "fully_noisy") spec.location = NoiseLocation::fully_noisy;
    else if (location == "system_only") spec.location = NoiseLocation::system_only;
    else if (location == "input_only") spec.location = NoiseLocation::input_only;
    else throw ConfigError("unknown noise location '" + location + "'");
    return spec;
}

DvqeConfig to_dvqe_config(const RunConfig& cfg, uint64_t seed) {
    DvqeConfig out;
    out.n = cfg.n;
    out.m = cfg.m;
    out.rounds = cfg.rounds;
    out.vqe_layers = cfg.vqe_layers;
    out.hamiltonian = resolve_hamiltonian(cfg);
    if (out.n == 0) out.n = out.hamiltonian.qubit_count;  // model = file without n
    out.noise = resolve_noise(cfg.noise, cfg.noise_p, cfg.noise_location);
    out.seed = seed;
    out.learning_rate = cfg.lr;
    out.iterations = cfg.iterations;
    return out;
}

RecoveryConfig to_recovery_config(const RunConfig& cfg, uint64_t seed) {
    RecoveryConfig out;
    out.n = cfg.n;
    out.m = cfg.m;
    out.rounds = cfg.rounds;
    out.target = resolve_target(cfg);
    out.noise_prep = resolve_noise(cfg.prep_noise, cfg.prep_noise_p, "input_only");
    out.noise_run = resolve_noise(cfg.noise, cfg.noise_p, cfg.noise_location);
    out.seed = seed;
    out.learning_rate = cfg.lr;
    out.iterations = cfg.iterations;
    return out;
}

}  // namespace dissim
