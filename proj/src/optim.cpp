#include "dissim/optim.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace dissim {

std::vector<double> init_params(size_t count, uint64_t seed) {
    std::vector<double> theta(count);
    std::mt19937_64 gen(seed);
    for (auto& t : theta) {
        // Top 53 bits -> [0,1); avoids implementation-defined distributions.
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        t = -M_PI + 2.0 * M_PI * u;
    }
    return theta;
}

namespace {

int gradient_thread_count(size_t components) {
    if (const char* env = std::getenv("DISSIM_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return std::min<size_t>(v, components);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min<size_t>(hw == 0 ? 1 : hw, components));
}

}  // namespace

std::vector<double> gradient_param_shift(ShiftableLoss& loss, std::span<const double> theta,
                                         double* loss_out) {
    const size_t p = loss.param_count();
    if (theta.size() != p) throw ContractError("gradient: parameter count mismatch");
    const double base = loss.value(theta);  // primes any prefix cache
    if (loss_out) *loss_out = base;
    std::vector<double> grad(p, 0.0);
    if (p == 0) return grad;

    const double shift = M_PI / 2.0;
    auto worker = [&](size_t begin, size_t end) {
        for (size_t k = begin; k < end; ++k) {
            const double plus = loss.value_shifted(theta, k, shift);
            const double minus = loss.value_shifted(theta, k, -shift);
            grad[k] = 0.5 * (plus - minus);
        }
    };
    const int threads = gradient_thread_count(p);
    if (threads <= 1) {
        worker(0, p);
    } else {
        std::vector<std::thread> pool;
        const size_t chunk = (p + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const size_t begin = t * chunk;
            const size_t end = std::min(p, begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return grad;
}

std::vector<double> compute_gradient(ShiftableLoss& loss, std::span<const double> theta,
                                     double* loss_out) {
    std::vector<double> grad(loss.param_count(), 0.0);
    if (loss.analytic_gradient(theta, grad)) {
        if (loss_out) *loss_out = loss.value(theta);
        return grad;
    }
    return gradient_param_shift(loss, theta, loss_out);
}

TrainingTrace train(ShiftableLoss& loss, std::vector<double> theta0, double learning_rate,
                    int iterations, const TrainOptions& options) {
    if (learning_rate <= 0.0) throw ContractError("train: learning rate must be positive");
    if (iterations < 1) throw ContractError("train: iterations must be >= 1");
    if (theta0.size() != loss.param_count())
        throw ContractError("train: parameter count mismatch");

    TrainingTrace trace;
    trace.config_echo = options.config_echo;
    for (const Monitor& m : options.monitors) trace.monitor_names.push_back(m.name);
    std::function<double(double)> aux = options.aux_from_loss;
    if (!aux) aux = [](double l) { return l; };

    std::vector<double> theta = std::move(theta0);
    for (int it = 0; it < iterations; ++it) {
        double loss_val = 0.0;
        const std::vector<double> grad = compute_gradient(loss, theta, &loss_val);
        if (!std::isfinite(loss_val)) {
            trace.aborted = true;
            trace.abort_reason = "non-finite loss at iteration " + std::to_string(it);
            trace.final_params = theta;
            trace.final_loss = loss_val;
            return trace;
        }
        double sq = 0.0;
        bool grad_finite = true;
        for (double g : grad) {
            if (!std::isfinite(g)) grad_finite = false;
            sq += g * g;
        }
        if (!grad_finite) {
            trace.aborted = true;
            trace.abort_reason = "non-finite gradient at iteration " + std::to_string(it);
            trace.final_params = theta;
            trace.final_loss = loss_val;
            return trace;
        }
        TraceRow row;
        row.iteration = it;
        row.loss = loss_val;
        row.aux_metric = aux(loss_val);
        row.grad_norm = std::sqrt(sq);
        for (const Monitor& m : options.monitors)
            row.monitor_values.push_back(m.eval(row, theta));
        trace.rows.push_back(std::move(row));

        for (size_t k = 0; k < theta.size(); ++k) theta[k] -= learning_rate * grad[k];
    }
    trace.final_loss = loss.value(theta);
    trace.final_params = std::move(theta);
    return trace;
}

}  // namespace dissim
