#include "core/optimizers.hpp"

#include <cmath>
#include <deque>

#include "core/common.hpp"

namespace minnorm {

void OptimizerSpec::validate() const {
    if (!(lr > 0.0)) throw domain_error("optim.lr must be positive");
    if (kind == Kind::momentum && !(mu >= 0.0 && mu < 1.0))
        throw domain_error("optim.mu must lie in [0, 1)");
    if (kind == Kind::adam) {
        if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
            throw domain_error("optim.beta1/2 must lie in [0, 1)");
        if (!(eps > 0.0)) throw domain_error("optim.eps must be positive");
    }
    if (kind == Kind::lbfgs && history < 1)
        throw domain_error("optim.history must be >= 1");
    if (batch_size < 0) throw domain_error("optim.batch_size must be >= 0");
    for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
        if (schedule[i].epoch > schedule[i + 1].epoch)
            throw domain_error("optim.schedule must be sorted by epoch");
}

OptimizerSpec::Kind optimizer_kind_from_string(std::string_view s) {
    if (s == "gd") return OptimizerSpec::Kind::gd;
    if (s == "sgd") return OptimizerSpec::Kind::sgd;
    if (s == "momentum") return OptimizerSpec::Kind::momentum;
    if (s == "adam") return OptimizerSpec::Kind::adam;
    if (s == "lbfgs") return OptimizerSpec::Kind::lbfgs;
    throw domain_error("unknown optimizer '" + std::string(s) + "'");
}

std::string optimizer_kind_to_string(OptimizerSpec::Kind k) {
    switch (k) {
    case OptimizerSpec::Kind::gd: return "gd";
    case OptimizerSpec::Kind::sgd: return "sgd";
    case OptimizerSpec::Kind::momentum: return "momentum";
    case OptimizerSpec::Kind::adam: return "adam";
    case OptimizerSpec::Kind::lbfgs: return "lbfgs";
    }
    return "?";
}

double schedule_factor(const std::vector<ScheduleEntry>& schedule, int epoch) {
    double f = 1.0;
    for (const auto& e : schedule)
        if (e.epoch <= epoch) f *= e.factor;
    return f;
}

namespace {

template <typename T>
void momentum_update(T& theta, const T& g, T& vel, double mu, double eta) {
    vel = mu * vel + g;
    theta -= eta * vel;
}

template <typename T>
void adam_update(T& theta, const T& g, T& m, T& v, double b1, double b2, double eps,
                 double c1, double c2, double eta) {
    m.array() = b1 * m.array() + (1.0 - b1) * g.array();
    v.array() = b2 * v.array() + (1.0 - b2) * g.array().square();
    theta.array() -= eta * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

} // namespace

void optimizer_step(const OptimizerSpec& spec, OptimizerState& state, NetParams& params,
                    const Gradients& grads, int epoch) {
    if (spec.kind == OptimizerSpec::Kind::lbfgs)
        throw domain_error("L-BFGS steps go through lbfgs_minimize");
    if (!grads.all_finite())
        throw numeric_error("non-finite gradient passed to optimizer_step");

    const double eta = spec.lr * schedule_factor(spec.schedule, epoch);
    switch (spec.kind) {
    case OptimizerSpec::Kind::gd:
    case OptimizerSpec::Kind::sgd:
        params.a -= eta * grads.da;
        params.W -= eta * grads.dW;
        params.b -= eta * grads.db;
        params.b0 -= eta * grads.db0;
        break;
    case OptimizerSpec::Kind::momentum: {
        if (!state.initialized) {
            state.velocity = Gradients::zero_like(params);
            state.initialized = true;
        }
        momentum_update(params.a, grads.da, state.velocity.da, spec.mu, eta);
        momentum_update(params.W, grads.dW, state.velocity.dW, spec.mu, eta);
        momentum_update(params.b, grads.db, state.velocity.db, spec.mu, eta);
        state.velocity.db0 = spec.mu * state.velocity.db0 + grads.db0;
        params.b0 -= eta * state.velocity.db0;
        break;
    }
    case OptimizerSpec::Kind::adam: {
        if (!state.initialized) {
            state.adam_m = Gradients::zero_like(params);
            state.adam_v = Gradients::zero_like(params);
            state.initialized = true;
        }
        ++state.adam_t;
        const double c1 = 1.0 - std::pow(spec.beta1, double(state.adam_t));
        const double c2 = 1.0 - std::pow(spec.beta2, double(state.adam_t));
        adam_update(params.a, grads.da, state.adam_m.da, state.adam_v.da,
                    spec.beta1, spec.beta2, spec.eps, c1, c2, eta);
        adam_update(params.W, grads.dW, state.adam_m.dW, state.adam_v.dW,
                    spec.beta1, spec.beta2, spec.eps, c1, c2, eta);
        adam_update(params.b, grads.db, state.adam_m.db, state.adam_v.db,
                    spec.beta1, spec.beta2, spec.eps, c1, c2, eta);
        state.adam_m.db0 = spec.beta1 * state.adam_m.db0 + (1.0 - spec.beta1) * grads.db0;
        state.adam_v.db0 = spec.beta2 * state.adam_v.db0 + (1.0 - spec.beta2) * grads.db0 * grads.db0;
        params.b0 -= eta * (state.adam_m.db0 / c1) / (std::sqrt(state.adam_v.db0 / c2) + spec.eps);
        break;
    }
    case OptimizerSpec::Kind::lbfgs:
        break; // unreachable
    }
}

void optimizer_step_flat(const OptimizerSpec& spec, FlatOptimizerState& state,
                         Eigen::VectorXd& theta, const Eigen::VectorXd& grad, int epoch) {
    if (spec.kind == OptimizerSpec::Kind::lbfgs)
        throw domain_error("L-BFGS steps go through lbfgs_minimize");
    if (!grad.allFinite())
        throw numeric_error("non-finite gradient passed to optimizer_step_flat");

    const double eta = spec.lr * schedule_factor(spec.schedule, epoch);
    switch (spec.kind) {
    case OptimizerSpec::Kind::gd:
    case OptimizerSpec::Kind::sgd:
        theta -= eta * grad;
        break;
    case OptimizerSpec::Kind::momentum:
        if (!state.initialized) {
            state.velocity = Eigen::VectorXd::Zero(theta.size());
            state.initialized = true;
        }
        momentum_update(theta, grad, state.velocity, spec.mu, eta);
        break;
    case OptimizerSpec::Kind::adam: {
        if (!state.initialized) {
            state.adam_m = Eigen::VectorXd::Zero(theta.size());
            state.adam_v = Eigen::VectorXd::Zero(theta.size());
            state.initialized = true;
        }
        ++state.adam_t;
        const double c1 = 1.0 - std::pow(spec.beta1, double(state.adam_t));
        const double c2 = 1.0 - std::pow(spec.beta2, double(state.adam_t));
        adam_update(theta, grad, state.adam_m, state.adam_v,
                    spec.beta1, spec.beta2, spec.eps, c1, c2, eta);
        break;
    }
    case OptimizerSpec::Kind::lbfgs:
        break;
    }
}

LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& opts) {
    if (opts.history < 1) throw domain_error("L-BFGS history must be >= 1");
    const Eigen::Index n = x0.size();

    LbfgsResult res;
    res.x = std::move(x0);
    Eigen::VectorXd g(n), g_new(n), p(n), x_trial(n), g_trial(n);
    res.value = objective(res.x, g);

    std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs; // (s, y)
    std::vector<double> alpha_buf;

    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        if (g.norm() < opts.grad_tol) return res;

        // Two-loop recursion for p = -H g.
        p = -g;
        alpha_buf.assign(pairs.size(), 0.0);
        for (std::size_t i = pairs.size(); i-- > 0;) {
            const auto& [s, yv] = pairs[i];
            const double rho = 1.0 / yv.dot(s);
            alpha_buf[i] = rho * s.dot(p);
            p -= alpha_buf[i] * yv;
        }
        if (!pairs.empty()) {
            const auto& [s, yv] = pairs.back();
            p *= s.dot(yv) / yv.squaredNorm();
        }
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& [s, yv] = pairs[i];
            const double rho = 1.0 / yv.dot(s);
            const double beta = rho * yv.dot(p);
            p += (alpha_buf[i] - beta) * s;
        }

        double dphi0 = g.dot(p);
        if (!(dphi0 < 0.0)) { // not a descent direction: drop history
            pairs.clear();
            p = -g;
            dphi0 = g.dot(p);
            if (!(dphi0 < 0.0)) return res; // gradient is exactly zero
        }

        // Backtracking Armijo line search.
        double step = pairs.empty() ? std::min(1.0, 1.0 / std::max(1.0, g.norm())) : 1.0;
        bool accepted = false;
        double f_trial = res.value;
        for (int trial = 0; trial < opts.max_line_search; ++trial) {
            x_trial = res.x + step * p;
            f_trial = objective(x_trial, g_trial);
            if (std::isfinite(f_trial) &&
                f_trial <= res.value + opts.armijo_c * step * dphi0) {
                accepted = true;
                break;
            }
            step *= opts.backtrack;
        }
        if (!accepted) {
            res.stalled = true;
            return res;
        }

        // One secant refinement on phi'(alpha); exact minimizer on quadratics.
        const double dphi1 = g_trial.dot(p);
        if (std::abs(dphi1) > 0.1 * std::abs(dphi0) && dphi1 != dphi0) {
            const double step2 = step * dphi0 / (dphi0 - dphi1);
            if (std::isfinite(step2) && step2 > 0.0 && step2 < 10.0 * step) {
                Eigen::VectorXd x2 = res.x + step2 * p;
                Eigen::VectorXd g2(n);
                const double f2 = objective(x2, g2);
                if (std::isfinite(f2) && f2 <= f_trial &&
                    f2 <= res.value + opts.armijo_c * step2 * dphi0) {
                    x_trial.swap(x2);
                    g_trial.swap(g2);
                    f_trial = f2;
                    step = step2;
                }
            }
        }

        Eigen::VectorXd s = x_trial - res.x;
        Eigen::VectorXd yv = g_trial - g;
        const double sy = s.dot(yv);
        const double step_norm = s.norm();
        if (sy > 1e-12 * step_norm * yv.norm()) {
            pairs.emplace_back(std::move(s), std::move(yv));
            if (int(pairs.size()) > opts.history) pairs.pop_front();
        }

        res.x.swap(x_trial);
        g.swap(g_trial);
        res.value = f_trial;
        if (opts.on_iteration) opts.on_iteration(res.iterations, res.x, res.value);
        if (step_norm < opts.step_tol) return res;
    }
    return res;
}

} // namespace minnorm
