#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dissim/optim.hpp"
#include "testutil.hpp"

using namespace dissim;
using testutil::Rng;

namespace {

// f(theta) = |theta|^2 with its closed-form gradient 2 theta.
FunctionLoss quadratic_bowl(size_t dim) {
    return FunctionLoss(
        dim,
        [](std::span<const double> t) {
            double s = 0.0;
            for (double x : t) s += x * x;
            return s;
        },
        [](std::span<const double> t, std::span<double> g) {
            for (size_t k = 0; k < t.size(); ++k) g[k] = 2.0 * t[k];
        });
}

DvqeConfig small_dvqe() {
    DvqeConfig cfg;
    cfg.n = 2;
    cfg.m = 1;
    cfg.rounds = 1;
    cfg.vqe_layers = 1;
    cfg.hamiltonian = benchmark_models(2).h1;
    return cfg;
}

}  // namespace

TEST_CASE("init_params determinism and range") {
    CHECK(init_params(0, 7).empty());
    const std::vector<double> a = init_params(64, 42);
    const std::vector<double> b = init_params(64, 42);
    CHECK(a == b);
    const std::vector<double> c = init_params(64, 43);
    CHECK(a != c);
    for (double t : a) {
        CHECK(t >= -M_PI);
        CHECK(t < M_PI);
    }
}

TEST_CASE("init_params sample mean obeys the law of large numbers") {
    const std::vector<double> draws = init_params(10000, 5);
    double mean = 0.0;
    for (double d : draws) mean += d;
    mean /= static_cast<double>(draws.size());
    CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("gradient of a constant loss vanishes") {
    FunctionLoss constant(5, [](std::span<const double>) { return 3.5; });
    const std::vector<double> theta(5, 0.7);
    const std::vector<double> g = gradient_param_shift(constant, theta);
    for (double gk : g) CHECK(gk == 0.0);
}

TEST_CASE("parameter-shift recovers the closed-form <Z> derivative") {
    // One qubit, Ry(a) then Rz(b) on |0>, measuring Z: the loss is cos(a), so
    // the exact derivative at a = pi/3 is -sin(pi/3).
    DvqeConfig cfg;
    cfg.n = 1;
    cfg.m = 0;
    cfg.rounds = 0;
    cfg.vqe_layers = 1;
    cfg.hamiltonian = PauliHamiltonian{1, {{1.0, "Z"}}};
    PipelineLoss loss = make_loss(cfg);
    REQUIRE(loss.param_count() == 2);
    const std::vector<double> theta{M_PI / 3.0, 0.4};
    double at = 0.0;
    const std::vector<double> g = gradient_param_shift(loss, theta, &at);
    CHECK(at == doctest::Approx(std::cos(M_PI / 3.0)).epsilon(1e-12));
    CHECK(g[0] == doctest::Approx(-std::sin(M_PI / 3.0)).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("parameter-shift matches central finite differences on task losses") {
    Rng rng(229);
    const double h = 1e-5;

    auto check_fd = [&](ShiftableLoss& loss) {
        const std::vector<double> theta = [&] {
            std::vector<double> t(loss.param_count());
            for (auto& x : t) x = rng.uniform(-M_PI, M_PI);
            return t;
        }();
        const std::vector<double> g = gradient_param_shift(loss, theta);
        for (size_t k = 0; k < theta.size(); ++k) {
            const double fd =
                (loss.value_shifted(theta, k, h) - loss.value_shifted(theta, k, -h)) /
                (2.0 * h);
            CHECK(std::abs(g[k] - fd) <=
                  std::max(1e-6, 1e-6 * std::max(std::abs(g[k]), std::abs(fd))));
        }
    };

    DvqeConfig dc = small_dvqe();
    dc.noise = {NoiseKind::depolarizing, 0.1, NoiseLocation::fully_noisy};
    PipelineLoss dvqe_loss = make_loss(dc);
    check_fd(dvqe_loss);

    RecoveryConfig rc;
    rc.n = 2;
    rc.m = 1;
    rc.rounds = 1;
    rc.target = w_state(2);
    rc.noise_prep = {NoiseKind::depolarizing, 0.1, NoiseLocation::input_only};
    PipelineLoss rec_loss = make_loss(rc);
    check_fd(rec_loss);
}

TEST_CASE("gradient descent on the quadratic bowl halves parameters per step") {
    FunctionLoss bowl = quadratic_bowl(4);
    std::vector<double> theta0{1.0, -2.0, 0.5, 3.0};
    const double f0 = 1.0 + 4.0 + 0.25 + 9.0;
    const TrainingTrace trace = train(bowl, theta0, 0.25, 6);
    REQUIRE(trace.rows.size() == 6);
    CHECK_FALSE(trace.aborted);
    for (size_t t = 0; t < trace.rows.size(); ++t) {
        CHECK(trace.rows[t].iteration == static_cast<int>(t));
        CHECK(trace.rows[t].loss ==
              doctest::Approx(f0 * std::pow(0.25, static_cast<double>(t))).epsilon(1e-12));
    }
    for (size_t k = 0; k < theta0.size(); ++k)
        CHECK(trace.final_params[k] ==
              doctest::Approx(theta0[k] * std::pow(0.5, 6.0)).epsilon(1e-12));
    CHECK(trace.final_loss == doctest::Approx(f0 * std::pow(0.25, 6.0)).epsilon(1e-12));
}

TEST_CASE("train records a single row for one iteration") {
    FunctionLoss bowl = quadratic_bowl(2);
    const TrainingTrace trace = train(bowl, {1.0, 1.0}, 0.1, 1);
    CHECK(trace.rows.size() == 1);
    CHECK(trace.rows[0].iteration == 0);
}

TEST_CASE("train aborts cleanly on non-finite losses") {
    int calls = 0;
    FunctionLoss explode(1, [&calls](std::span<const double>) {
        ++calls;
        return calls > 8 ? std::nan("") : 1.0;
    });
    const TrainingTrace trace = train(explode, {0.5}, 0.1, 50);
    CHECK(trace.aborted);
    CHECK(!trace.abort_reason.empty());
    for (const TraceRow& row : trace.rows) {
        CHECK(std::isfinite(row.loss));
        CHECK(std::isfinite(row.grad_norm));
    }
}

TEST_CASE("training a task loss is deterministic") {
    DvqeConfig cfg = small_dvqe();
    cfg.noise = {NoiseKind::bit_flip, 0.05, NoiseLocation::fully_noisy};
    auto run_once = [&] {
        PipelineLoss loss = make_loss(cfg);
        return train(loss, init_params(loss.param_count(), cfg.seed), cfg.learning_rate, 5);
    };
    const TrainingTrace a = run_once();
    const TrainingTrace b = run_once();
    REQUIRE(a.rows.size() == b.rows.size());
    for (size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].loss == b.rows[i].loss);
        CHECK(a.rows[i].grad_norm == b.rows[i].grad_norm);
    }
    CHECK(a.final_params == b.final_params);
}

TEST_CASE("a sufficiently damped step never increases a smooth loss") {
    Rng rng(233);
    DvqeConfig cfg = small_dvqe();
    PipelineLoss loss = make_loss(cfg);
    std::vector<double> theta(loss.param_count());
    for (auto& t : theta) t = rng.uniform(-M_PI, M_PI);
    double base = 0.0;
    const std::vector<double> g = gradient_param_shift(loss, theta, &base);
    double eta = 1.0;
    bool ok = false;
    for (int halving = 0; halving < 20 && !ok; ++halving, eta *= 0.5) {
        std::vector<double> stepped = theta;
        for (size_t k = 0; k < stepped.size(); ++k) stepped[k] -= eta * g[k];
        ok = loss.value(stepped) <= base + 1e-9;
    }
    CHECK(ok);
}

TEST_CASE("monitors are evaluated per iteration and recorded in order") {
    FunctionLoss bowl = quadratic_bowl(2);
    std::vector<Monitor> monitors;
    monitors.push_back({"loss_copy", [](const TraceRow& row, std::span<const double>) {
                            return row.loss;
                        }});
    monitors.push_back({"theta0", [](const TraceRow&, std::span<const double> theta) {
                            return theta[0];
                        }});
    TrainOptions opt;
    opt.monitors = monitors;
    const TrainingTrace trace = train(bowl, {2.0, 0.0}, 0.25, 3, opt);
    REQUIRE(trace.monitor_names.size() == 2);
    CHECK(trace.monitor_names[0] == "loss_copy");
    for (const TraceRow& row : trace.rows) {
        REQUIRE(row.monitor_values.size() == 2);
        CHECK(row.monitor_values[0] == row.loss);
    }
    CHECK(trace.rows[0].monitor_values[1] == 2.0);
    CHECK(trace.rows[1].monitor_values[1] == 1.0);  // halved by the first step
}
