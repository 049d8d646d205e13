#ifndef MINNORM_OPTIMIZERS_HPP
#define MINNORM_OPTIMIZERS_HPP

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "core/nn_model.hpp"

namespace minnorm {

struct ScheduleEntry {
    int epoch;
    double factor;
};

struct OptimizerSpec {
    enum class Kind { gd, sgd, momentum, adam, lbfgs };
    Kind kind = Kind::gd;
    double lr = 1e-3;
    int batch_size = 0;     // 0 = full batch
    double mu = 0.99;       // momentum, in [0, 1)
    double beta1 = 0.9;     // Adam, in [0, 1)
    double beta2 = 0.999;   // Adam, in [0, 1)
    double eps = 1e-8;      // Adam, > 0
    int history = 10;       // L-BFGS memory, >= 1
    int max_line_search = 30;
    std::vector<ScheduleEntry> schedule; // sorted by epoch

    void validate() const;
};

OptimizerSpec::Kind optimizer_kind_from_string(std::string_view s);
std::string optimizer_kind_to_string(OptimizerSpec::Kind k);

/// Product of all schedule factors whose epoch threshold is <= epoch.
double schedule_factor(const std::vector<ScheduleEntry>& schedule, int epoch);

/// Mutable per-run buffers. Momentum keeps a velocity, Adam first/second
/// moments and a step counter. Buffers are lazily shaped on first use.
struct OptimizerState {
    Gradients velocity;
    Gradients adam_m;
    Gradients adam_v;
    long adam_t = 0;
    bool initialized = false;
};

/// One parameter update with effective rate lr * schedule_factor(epoch).
/// GD/SGD: theta -= eta g. Momentum (heavy ball, no dampening): v <- mu v + g,
/// theta -= eta v. Adam: bias-corrected moments, theta -= eta m^ / (sqrt(v^) + eps).
/// L-BFGS runs through lbfgs_minimize instead.
void optimizer_step(const OptimizerSpec& spec, OptimizerState& state, NetParams& params,
                    const Gradients& grads, int epoch);

/// Same update rules on a flat parameter vector (used for deep nets).
struct FlatOptimizerState {
    Eigen::VectorXd velocity, adam_m, adam_v;
    long adam_t = 0;
    bool initialized = false;
};
void optimizer_step_flat(const OptimizerSpec& spec, FlatOptimizerState& state,
                         Eigen::VectorXd& theta, const Eigen::VectorXd& grad, int epoch);

/// Objective evaluates value and gradient at a point.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsOptions {
    int history = 10;
    int max_line_search = 30;
    int max_iterations = 1000;
    double grad_tol = 1e-10;
    double step_tol = 1e-14;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    /// Called after each accepted step with (iteration, point, value).
    std::function<void(int, const Eigen::VectorXd&, double)> on_iteration;
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool stalled = false; // line search failed max_line_search times
};

/// Two-loop-recursion L-BFGS with a backtracking Armijo line search refined
/// by one secant step on the directional derivative (exact on quadratics).
/// The objective is monotone non-increasing across accepted steps.
LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& opts);

} // namespace minnorm

#endif
