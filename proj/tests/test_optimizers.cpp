#include <doctest.h>

#include <cmath>

#include "core/common.hpp"
#include "core/datagen.hpp"
#include "core/initializers.hpp"
#include "core/optimizers.hpp"
#include "core/rng.hpp"

#include "test_util.hpp"

using namespace minnorm;

namespace {

NetParams scalar_params(double theta) {
    NetParams p;
    p.a = Eigen::VectorXd::Constant(1, theta);
    p.W = Eigen::MatrixXd::Zero(1, 1);
    p.b = Eigen::VectorXd::Zero(1);
    return p;
}

Gradients scalar_grads(double g) {
    Gradients gr;
    gr.da = Eigen::VectorXd::Constant(1, g);
    gr.dW = Eigen::MatrixXd::Zero(1, 1);
    gr.db = Eigen::VectorXd::Zero(1);
    gr.db0 = 0.0;
    return gr;
}

} // namespace

TEST_CASE("schedule factor multiplies all thresholds reached") {
    std::vector<ScheduleEntry> one = {{50, 0.1}};
    CHECK(schedule_factor(one, 49) == doctest::Approx(1.0));
    CHECK(schedule_factor(one, 50) == doctest::Approx(0.1));
    std::vector<ScheduleEntry> two = {{50, 0.1}, {100, 0.1}};
    CHECK(schedule_factor(two, 120) == doctest::Approx(0.01));
}

TEST_CASE("gd step") {
    OptimizerSpec spec;
    spec.kind = OptimizerSpec::Kind::gd;
    spec.lr = 0.1;
    OptimizerState st;
    NetParams p = scalar_params(1.0);
    optimizer_step(spec, st, p, scalar_grads(2.0), 0);
    CHECK(p.a[0] == doctest::Approx(0.8));
}

TEST_CASE("adam first step with exact bias correction") {
    OptimizerSpec spec;
    spec.kind = OptimizerSpec::Kind::adam;
    spec.lr = 1e-3;
    OptimizerState st;
    NetParams p = scalar_params(0.0);
    optimizer_step(spec, st, p, scalar_grads(1.0), 0);
    // m^ = v^ = 1 exactly after one step, so the move is lr / (1 + eps).
    CHECK(p.a[0] == doctest::Approx(-1e-3 / (1.0 + 1e-8)).epsilon(1e-12));
}

TEST_CASE("momentum accumulates the heavy-ball velocity") {
    OptimizerSpec spec;
    spec.kind = OptimizerSpec::Kind::momentum;
    spec.lr = 1.0;
    spec.mu = 0.99;
    OptimizerState st;
    NetParams p = scalar_params(0.0);
    optimizer_step(spec, st, p, scalar_grads(1.0), 0);
    CHECK(p.a[0] == doctest::Approx(-1.0));
    optimizer_step(spec, st, p, scalar_grads(1.0), 0);
    CHECK(p.a[0] == doctest::Approx(-1.0 - 1.99));
}

TEST_CASE("zero gradient with empty state is the identity") {
    for (auto kind : {OptimizerSpec::Kind::gd, OptimizerSpec::Kind::momentum,
                      OptimizerSpec::Kind::adam}) {
        OptimizerSpec spec;
        spec.kind = kind;
        spec.lr = 0.5;
        OptimizerState st;
        NetParams p = scalar_params(1.2345);
        p.b0 = -0.75;
        optimizer_step(spec, st, p, scalar_grads(0.0), 0);
        CHECK(p.a[0] == 1.2345);
        CHECK(p.b0 == -0.75);
    }
}

TEST_CASE("non-finite gradients abort the step") {
    OptimizerSpec spec;
    spec.kind = OptimizerSpec::Kind::gd;
    OptimizerState st;
    NetParams p = scalar_params(0.0);
    CHECK_THROWS_AS(optimizer_step(spec, st, p, scalar_grads(std::nan("")), 0), numeric_error);
}

TEST_CASE("adam per-coordinate move is bounded by lr/(1-beta1)") {
    OptimizerSpec spec;
    spec.kind = OptimizerSpec::Kind::adam;
    spec.lr = 0.01;
    OptimizerState st;
    NetParams p = scalar_params(0.0);
    RngStream s(5, "adambound");
    double prev = p.a[0];
    for (int t = 0; t < 300; ++t) {
        optimizer_step(spec, st, p, scalar_grads(s.uniform(-10, 10)), 0);
        CHECK(std::abs(p.a[0] - prev) <= spec.lr / (1.0 - spec.beta1) + 1e-15);
        prev = p.a[0];
    }
}

TEST_CASE("frozen inner layer stays bit-identical through training steps") {
    const InitScheme scheme{InitScheme::Kind::xavier_uniform, 1.0};
    Dataset ds = dataset_1d_abs(4, 1.0, 2.0);
    for (auto kind : {OptimizerSpec::Kind::gd, OptimizerSpec::Kind::momentum,
                      OptimizerSpec::Kind::adam}) {
        NetParams p = init_net(scheme, 16, 1, 99);
        p.frozen_inner = true;
        const Eigen::MatrixXd W0 = p.W;
        const Eigen::VectorXd b0v = p.b;
        OptimizerSpec spec;
        spec.kind = kind;
        spec.lr = 1e-2;
        OptimizerState st;
        for (int t = 0; t < 25; ++t) {
            auto res = backward(p, Activation::relu(), LossKind::mse, 0.01, ds);
            optimizer_step(spec, st, p, res.grads, t);
        }
        CHECK(bits_equal(p.W, W0));
        CHECK(bits_equal(p.b, b0v));
        CHECK(!bits_equal(p.a, init_net(scheme, 16, 1, 99).a)); // outer layer moved
    }
}

TEST_CASE("lbfgs: 1d quadratic lands on the minimizer") {
    Objective obj = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g.resize(1);
        g[0] = 2.0 * (x[0] - 3.0);
        return (x[0] - 3.0) * (x[0] - 3.0);
    };
    auto res = lbfgs_minimize(obj, Eigen::VectorXd::Zero(1), LbfgsOptions{});
    CHECK(std::abs(res.x[0] - 3.0) < 1e-8);
    CHECK(!res.stalled);
}

TEST_CASE("lbfgs: ill-conditioned 2d quadratic within 30 iterations") {
    Objective obj = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g.resize(2);
        g[0] = x[0];
        g[1] = 100.0 * x[1];
        return 0.5 * (x[0] * x[0] + 100.0 * x[1] * x[1]);
    };
    LbfgsOptions opts;
    opts.max_iterations = 30;
    auto res = lbfgs_minimize(obj, Eigen::Vector2d(1.0, 1.0), opts);
    CHECK(res.x.norm() < 1e-6);
    CHECK(res.iterations <= 30);
}

TEST_CASE("lbfgs: Rosenbrock reaches the global minimum") {
    int evals = 0;
    Objective obj = [&evals](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        ++evals;
        const double a = 1.0, b = 100.0;
        g.resize(2);
        g[0] = -2.0 * (a - x[0]) - 4.0 * b * x[0] * (x[1] - x[0] * x[0]);
        g[1] = 2.0 * b * (x[1] - x[0] * x[0]);
        const double t1 = a - x[0], t2 = x[1] - x[0] * x[0];
        return t1 * t1 + b * t2 * t2;
    };
    LbfgsOptions opts;
    opts.max_iterations = 200;
    opts.grad_tol = 1e-12;
    auto res = lbfgs_minimize(obj, Eigen::Vector2d(-1.2, 1.0), opts);
    CHECK(res.value < 1e-8);
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("lbfgs: monotone values and quadratic termination in <= k+2 iterations") {
    RngStream s(17, "quad");
    for (int k = 2; k <= 6; ++k) {
        Eigen::MatrixXd B(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) B(i, j) = s.uniform(-1, 1);
        Eigen::MatrixXd A = B.transpose() * B + 0.3 * Eigen::MatrixXd::Identity(k, k);
        Eigen::VectorXd c(k);
        for (int i = 0; i < k; ++i) c[i] = s.uniform(-1, 1);

        double last = std::numeric_limits<double>::infinity();
        bool monotone = true;
        LbfgsOptions opts;
        opts.history = 10;
        opts.grad_tol = 1e-10;
        opts.on_iteration = [&](int, const Eigen::VectorXd&, double v) {
            if (v > last + 1e-15) monotone = false;
            last = v;
        };
        Objective obj = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
            g = A * x - c;
            return 0.5 * x.dot(A * x) - c.dot(x);
        };
        Eigen::VectorXd x0(k);
        for (int i = 0; i < k; ++i) x0[i] = s.uniform(-2, 2);
        auto res = lbfgs_minimize(obj, x0, opts);
        Eigen::VectorXd g_final = A * res.x - c;
        CHECK(g_final.norm() < 1e-10);
        CHECK(res.iterations <= k + 2);
        CHECK(monotone);
    }
}

TEST_CASE("lbfgs: line-search failure sets the stalled flag, not an error") {
    Objective obj = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g.resize(1);
        g[0] = x[0] >= 0.0 ? 1.0 : -1.0;
        return std::abs(x[0]);
    };
    LbfgsOptions opts;
    opts.max_line_search = 8;
    auto res = lbfgs_minimize(obj, Eigen::VectorXd::Zero(1), opts);
    CHECK(res.stalled);
    CHECK(res.x[0] == 0.0);
}

TEST_CASE("invalid optimizer specs are rejected") {
    OptimizerSpec spec;
    spec.kind = OptimizerSpec::Kind::momentum;
    spec.mu = 1.0;
    CHECK_THROWS_AS(spec.validate(), domain_error);
    spec.mu = 0.9;
    spec.lr = 0.0;
    CHECK_THROWS_AS(spec.validate(), domain_error);
    CHECK_THROWS_AS(optimizer_kind_from_string("adamw"), domain_error);
}
