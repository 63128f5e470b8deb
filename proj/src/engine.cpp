#include "dissim/engine.hpp"

#include <cmath>

#include "dissim/kernels.hpp"

namespace dissim {

namespace {

void check_noise_range(const NoiseSpec& spec, const char* what) {
    if (spec.strength < 0.0 || spec.strength > 1.0)
        throw ContractError(std::string(what) + ": noise strength must lie in [0,1]");
}

std::vector<int> all_qubits(int n) {
    std::vector<int> q(n);
    for (int i = 0; i < n; ++i) q[i] = i;
    return q;
}

}  // namespace

void validate(const DvqeConfig& cfg) {
    if (cfg.n < 1) throw ContractError("dvqe: n must be >= 1");
    if (cfg.vqe_layers < 1) throw ContractError("dvqe: vqe_layers must be >= 1");
    if (cfg.rounds < 0) throw ContractError("dvqe: rounds must be >= 0");
    if (cfg.rounds >= 1 && cfg.m < 1)
        throw ContractError("dvqe: rounds >= 1 requires at least one ancilla");
    if (cfg.m < 0) throw ContractError("dvqe: m must be >= 0");
    if (cfg.hamiltonian.qubit_count != cfg.n)
        throw ContractError("dvqe: Hamiltonian qubit count differs from n");
    if (cfg.learning_rate <= 0.0) throw ContractError("dvqe: learning rate must be positive");
    if (cfg.iterations < 1) throw ContractError("dvqe: iterations must be >= 1");
    check_noise_range(cfg.noise, "dvqe");
}

void validate(const RecoveryConfig& cfg) {
    if (cfg.n < 1) throw ContractError("recovery: n must be >= 1");
    if (cfg.m < 1) throw ContractError("recovery: m must be >= 1");
    if (cfg.rounds < 1) throw ContractError("recovery: rounds must be >= 1");
    if (cfg.target.shape.qubit_count != cfg.n)
        throw ContractError("recovery: target qubit count differs from n");
    if (cfg.learning_rate <= 0.0) throw ContractError("recovery: learning rate must be positive");
    if (cfg.iterations < 1) throw ContractError("recovery: iterations must be >= 1");
    check_noise_range(cfg.noise_prep, "recovery prep");
    check_noise_range(cfg.noise_run, "recovery run");
    if (cfg.noise_prep.enabled() && cfg.noise_prep.location != NoiseLocation::input_only)
        throw ContractError("recovery: preparation noise must be tagged input_only");
}

int dvqe_param_count(const DvqeConfig& cfg) {
    return 2 * cfg.n * cfg.vqe_layers * (cfg.rounds + 1) +
           dissipative_block_param_count(cfg.n, cfg.m) * cfg.rounds;
}

int recovery_param_count(const RecoveryConfig& cfg) {
    return dissipative_block_param_count(cfg.n, cfg.m) * cfg.rounds;
}

DensityMatrix dissipative_round(const DensityMatrix& rho_s, const ParamCircuit& block,
                                std::span<const double> theta, const NoiseSpec& noise, int m) {
    if (block.qubit_count != rho_s.shape.qubit_count + m)
        throw ContractError("dissipative_round: block width must be n + m");
    const RegisterShape anc = RegisterShape::qubits(m);
    CMatrix anc0(anc.dim, anc.dim);
    anc0.at(0, 0) = 1.0;
    CMatrix joint = tensor(rho_s.mat, anc0);
    detail::apply_circuit_inplace(joint, block, theta, noise);
    return DensityMatrix{rho_s.shape, partial_trace(joint, rho_s.shape, anc, DropPosition::back)};
}

void PipelineLoss::index_params() {
    param_op_.assign(param_count_, 0);
    for (size_t i = 0; i < ops_.size(); ++i)
        if (ops_[i].kind == Op::Kind::gate && ops_[i].gate.param_index >= 0)
            param_op_[ops_[i].gate.param_index] = i;
}

void PipelineLoss::build_dvqe(const DvqeConfig& cfg) {
    validate(cfg);
    is_dvqe_ = true;
    n_ = cfg.n;
    m_ = cfg.m;
    h_dense_ = to_dense(cfg.hamiltonian);
    block_noise_ = cfg.noise;

    const bool vqe_noisy = cfg.noise.enabled() &&
                           (cfg.noise.location == NoiseLocation::fully_noisy ||
                            cfg.noise.location == NoiseLocation::system_only);
    const bool dis_noisy =
        cfg.noise.enabled() && cfg.noise.location == NoiseLocation::fully_noisy;

    DensityMatrix input = zero_state(cfg.n);
    if (cfg.noise.enabled() && cfg.noise.location == NoiseLocation::input_only)
        input = inject_noise(input, cfg.noise, all_qubits(cfg.n));
    input_ = std::move(input.mat);

    int offset = 0;
    auto push_block = [&](const ParamCircuit& block, bool noisy) {
        for (const Gate& g : block.gates)
            ops_.push_back(Op{Op::Kind::gate, g, block.qubit_count});
        if (noisy) ops_.push_back(Op{Op::Kind::noise, {}, block.qubit_count});
    };
    const ParamCircuit vqe0 = build_vqe_block(cfg.n, cfg.vqe_layers, offset);
    check_circuit(vqe0);
    offset = vqe0.param_count;
    push_block(vqe0, vqe_noisy);
    for (int t = 1; t <= cfg.rounds; ++t) {
        const ParamCircuit vqe = build_vqe_block(cfg.n, cfg.vqe_layers, offset);
        offset = vqe.param_count;
        push_block(vqe, vqe_noisy);
        ops_.push_back(Op{Op::Kind::attach, {}, cfg.n});
        const ParamCircuit dis = build_dissipative_block(cfg.n, cfg.m, offset);
        offset = dis.param_count;
        push_block(dis, dis_noisy);
        ops_.push_back(Op{Op::Kind::detach, {}, cfg.n + cfg.m});
    }
    param_count_ = offset;
    if (static_cast<int>(param_count_) != dvqe_param_count(cfg))
        throw ContractError("dvqe parameter layout inconsistent");
    index_params();
}

void PipelineLoss::build_recovery(const RecoveryConfig& cfg) {
    validate(cfg);
    is_dvqe_ = false;
    n_ = cfg.n;
    m_ = cfg.m;
    target_ = cfg.target;
    block_noise_ = cfg.noise_run;

    DensityMatrix input = projector(cfg.target);
    if (cfg.noise_prep.enabled())
        input = inject_noise(input, cfg.noise_prep, all_qubits(cfg.n));
    input_ = std::move(input.mat);

    const bool dis_noisy =
        cfg.noise_run.enabled() && cfg.noise_run.location == NoiseLocation::fully_noisy;
    int offset = 0;
    for (int t = 1; t <= cfg.rounds; ++t) {
        ops_.push_back(Op{Op::Kind::attach, {}, cfg.n});
        const ParamCircuit dis = build_dissipative_block(cfg.n, cfg.m, offset);
        offset = dis.param_count;
        for (const Gate& g : dis.gates)
            ops_.push_back(Op{Op::Kind::gate, g, cfg.n + cfg.m});
        if (dis_noisy) ops_.push_back(Op{Op::Kind::noise, {}, cfg.n + cfg.m});
        ops_.push_back(Op{Op::Kind::detach, {}, cfg.n + cfg.m});
    }
    param_count_ = offset;
    if (static_cast<int>(param_count_) != recovery_param_count(cfg))
        throw ContractError("recovery parameter layout inconsistent");
    index_params();
}

PipelineLoss PipelineLoss::dvqe(const DvqeConfig& cfg) {
    PipelineLoss loss;
    loss.build_dvqe(cfg);
    return loss;
}

PipelineLoss PipelineLoss::recovery(const RecoveryConfig& cfg) {
    PipelineLoss loss;
    loss.build_recovery(cfg);
    return loss;
}

double PipelineLoss::loss_of(const CMatrix& rho) const {
    if (is_dvqe_) {
        const complexd val = trace_product(h_dense_, rho);
        if (std::abs(val.imag()) > tol::imag_residue)
            throw NumericError("energy expectation picked up an imaginary residue");
        return val.real();
    }
    const complexd overlap = quadratic_form(target_.amplitudes, rho);
    if (std::abs(overlap.imag()) > tol::imag_residue)
        throw NumericError("fidelity picked up an imaginary residue");
    const double f = std::min(1.0, std::max(0.0, overlap.real()));
    if (overlap.real() < -tol::psd_slack || overlap.real() > 1.0 + tol::psd_slack)
        throw NumericError("fidelity outside [0,1] beyond tolerance");
    return 1.0 - f;
}

double PipelineLoss::run(std::span<const double> theta, size_t start_op, CMatrix rho,
                         size_t shift_k, double shift_delta, bool record) const {
    std::vector<double> shifted;
    std::span<const double> use = theta;
    if (shift_k != static_cast<size_t>(-1)) {
        shifted.assign(theta.begin(), theta.end());
        shifted[shift_k] += shift_delta;
        use = shifted;
    }
    const RegisterShape sys = RegisterShape::qubits(n_);
    const RegisterShape anc = m_ > 0 ? RegisterShape::qubits(m_) : RegisterShape::qubits(0);
    for (size_t i = start_op; i < ops_.size(); ++i) {
        const Op& op = ops_[i];
        switch (op.kind) {
            case Op::Kind::attach: {
                CMatrix anc0(anc.dim, anc.dim);
                anc0.at(0, 0) = 1.0;
                rho = tensor(rho, anc0);
                break;
            }
            case Op::Kind::detach:
                rho = partial_trace(rho, sys, anc, DropPosition::back);
                break;
            case Op::Kind::gate: {
                if (record && op.gate.param_index >= 0)
                    checkpoints_[op.gate.param_index] = rho;
                detail::apply_gate_inplace(rho, op.gate, use, op.width);
                break;
            }
            case Op::Kind::noise:
                detail::inject_noise_inplace(rho, block_noise_, all_qubits(op.width), op.width);
                break;
        }
    }
    return loss_of(rho);
}

double PipelineLoss::value(std::span<const double> theta) {
    if (theta.size() != param_count_) throw ContractError("loss: parameter count mismatch");
    cached_theta_.assign(theta.begin(), theta.end());
    checkpoints_.assign(param_count_, CMatrix());
    return run(theta, 0, input_, static_cast<size_t>(-1), 0.0, true);
}

double PipelineLoss::value_shifted(std::span<const double> theta, size_t k,
                                   double delta) const {
    if (theta.size() != param_count_ || k >= param_count_)
        throw ContractError("loss: bad shifted evaluation request");
    const bool cache_valid =
        cached_theta_.size() == theta.size() &&
        std::equal(cached_theta_.begin(), cached_theta_.end(), theta.begin()) &&
        !checkpoints_.empty() && checkpoints_[k].rows > 0;
    if (!cache_valid) {
        std::vector<double> shifted(theta.begin(), theta.end());
        shifted[k] += delta;
        return evaluate(shifted);
    }
    return run(theta, param_op_[k], checkpoints_[k], k, delta, false);
}

double PipelineLoss::evaluate(std::span<const double> theta) const {
    if (theta.size() != param_count_) throw ContractError("loss: parameter count mismatch");
    return run(theta, 0, input_, static_cast<size_t>(-1), 0.0, false);
}

std::pair<double, DensityMatrix> PipelineLoss::forward(std::span<const double> theta) const {
    if (theta.size() != param_count_) throw ContractError("loss: parameter count mismatch");
    // Re-run the op list, keeping the final state.
    CMatrix rho = input_;
    const RegisterShape sys = RegisterShape::qubits(n_);
    const RegisterShape anc = m_ > 0 ? RegisterShape::qubits(m_) : RegisterShape::qubits(0);
    for (const Op& op : ops_) {
        switch (op.kind) {
            case Op::Kind::attach: {
                CMatrix anc0(anc.dim, anc.dim);
                anc0.at(0, 0) = 1.0;
                rho = tensor(rho, anc0);
                break;
            }
            case Op::Kind::detach:
                rho = partial_trace(rho, sys, anc, DropPosition::back);
                break;
            case Op::Kind::gate:
                detail::apply_gate_inplace(rho, op.gate, theta, op.width);
                break;
            case Op::Kind::noise:
                detail::inject_noise_inplace(rho, block_noise_, all_qubits(op.width), op.width);
                break;
        }
    }
    DensityMatrix out{sys, std::move(rho)};
    check_density_cheap(out);
    return {loss_of(out.mat), std::move(out)};
}

std::pair<double, DensityMatrix> dvqe_forward(const DvqeConfig& cfg,
                                              std::span<const double> theta) {
    return PipelineLoss::dvqe(cfg).forward(theta);
}

std::pair<double, DensityMatrix> recovery_forward(const RecoveryConfig& cfg,
                                                  std::span<const double> theta) {
    return PipelineLoss::recovery(cfg).forward(theta);
}

PipelineLoss make_loss(const DvqeConfig& cfg) { return PipelineLoss::dvqe(cfg); }
PipelineLoss make_loss(const RecoveryConfig& cfg) { return PipelineLoss::recovery(cfg); }

}  // namespace dissim
