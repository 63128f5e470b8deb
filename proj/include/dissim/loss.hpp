// Loss-function interface shared by the engine and the optimizer. The shifted
// entry point lets implementations reuse cached prefix states when a single
// parameter moves, which is what parameter-shift gradients do in bulk.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dissim {

class ShiftableLoss {
  public:
    virtual ~ShiftableLoss() = default;

    virtual size_t param_count() const = 0;

    // Full evaluation. Implementations may rebuild internal caches consumed by
    // value_shifted; callers must invoke value(theta) before shifting at theta.
    virtual double value(std::span<const double> theta) { return evaluate(theta); }

    // Loss at theta with component k displaced by delta. Must be safe to call
    // concurrently after a value(theta) call with the same theta.
    virtual double value_shifted(std::span<const double> theta, size_t k, double delta) const {
        std::vector<double> shifted(theta.begin(), theta.end());
        shifted[k] += delta;
        return evaluate(shifted);
    }

    // Closed-form gradient when the loss has one (analytic fixtures); circuit
    // losses return false and are differentiated by the parameter-shift rule.
    virtual bool analytic_gradient(std::span<const double> /*theta*/,
                                   std::span<double> /*out*/) const {
        return false;
    }

  protected:
    // Stateless evaluation at an arbitrary point.
    virtual double evaluate(std::span<const double> theta) const = 0;
};

// Plain-function adapter, mainly for fixtures and closed-form tests.
class FunctionLoss : public ShiftableLoss {
  public:
    using Fn = std::function<double(std::span<const double>)>;
    using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

    FunctionLoss(size_t count, Fn f, GradFn grad = nullptr)
        : count_(count), f_(std::move(f)), grad_(std::move(grad)) {}

    size_t param_count() const override { return count_; }

    bool analytic_gradient(std::span<const double> theta, std::span<double> out) const override {
        if (!grad_) return false;
        grad_(theta, out);
        return true;
    }

  protected:
    double evaluate(std::span<const double> theta) const override { return f_(theta); }

  private:
    size_t count_;
    Fn f_;
    GradFn grad_;
};

}  // namespace dissim
