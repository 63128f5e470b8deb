// Parameter initialization, parameter-shift gradients, and plain
// gradient-descent training with per-iteration trace recording.
#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "dissim/engine.hpp"
#include "dissim/loss.hpp"

namespace dissim {

// I.i.d. uniform draws on [-pi, pi) from a seeded deterministic generator.
std::vector<double> init_params(size_t count, uint64_t seed);

// Exact gradient for rotation-generated losses:
//   dC/dk = [C(theta + (pi/2) e_k) - C(theta - (pi/2) e_k)] / 2.
// Components are evaluated concurrently and written to their own slots, so the
// result is deterministic regardless of scheduling. When loss_out is non-null
// it receives C(theta) from the cache-priming evaluation.
std::vector<double> gradient_param_shift(ShiftableLoss& loss, std::span<const double> theta,
                                         double* loss_out = nullptr);

// Gradient by the loss's preferred route: its analytic gradient when it has
// one, the parameter-shift rule otherwise. Used by the training loop.
std::vector<double> compute_gradient(ShiftableLoss& loss, std::span<const double> theta,
                                     double* loss_out = nullptr);

// Named per-iteration diagnostic appended to the trace rows.
struct Monitor {
    std::string name;
    std::function<double(const TraceRow& row, std::span<const double> theta)> eval;
};

struct TrainOptions {
    std::span<const Monitor> monitors;
    // Maps the loss value to the recorded auxiliary metric (energy for
    // ground-state search, fidelity = 1 - loss for recovery).
    std::function<double(double)> aux_from_loss;
    std::string config_echo;
};

// Plain gradient descent, no momentum or adaptivity. Records one row per
// iteration (the state before that iteration's update); aborts on non-finite
// loss or gradient, keeping all finite rows.
TrainingTrace train(ShiftableLoss& loss, std::vector<double> theta0, double learning_rate,
                    int iterations, const TrainOptions& options = {});

}  // namespace dissim
