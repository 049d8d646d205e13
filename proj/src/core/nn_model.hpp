#ifndef MINNORM_NN_MODEL_HPP
#define MINNORM_NN_MODEL_HPP

#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "core/dataset.hpp"
#include "core/losses.hpp"

namespace minnorm {

/// Hidden-layer activation. The leaky variant is max(z,0) + slope*min(z,0);
/// the slope must lie in (0, 1).
struct Activation {
    enum class Kind { relu, leaky_relu };
    Kind kind = Kind::relu;
    double slope = 0.1;

    static Activation relu() { return {Kind::relu, 0.0}; }
    static Activation leaky(double slope);
};

inline double activate(const Activation& act, double z) {
    if (z > 0.0) return z;
    return act.kind == Activation::Kind::leaky_relu ? act.slope * z : 0.0;
}

/// Subgradient convention: the derivative at the kink z == 0 is 0, so a
/// neuron sitting exactly on its kink receives no gradient.
inline double activate_grad(const Activation& act, double z) {
    if (z > 0.0) return 1.0;
    if (z < 0.0) return act.kind == Activation::Kind::leaky_relu ? act.slope : 0.0;
    return 0.0;
}

/// One-hidden-layer network f(x) = b0 + sum_i a_i * act(w_i . x + b_i).
/// Row i of W is the inner weight vector of neuron i. With frozen_inner set,
/// W and b act as fixed random features: backward zeroes their gradients.
struct NetParams {
    Eigen::VectorXd a;  // outer weights, length m
    Eigen::MatrixXd W;  // inner weights, m x d
    Eigen::VectorXd b;  // inner biases, length m
    double b0 = 0.0;    // output bias (never regularized)
    bool frozen_inner = false;

    Eigen::Index width() const { return a.size(); }
    Eigen::Index input_dim() const { return W.cols(); }

    /// Throws shape_error unless a, W, b agree on m and all entries are finite.
    void check_consistent() const;
};

/// Gradient container, shape-matched to NetParams.
struct Gradients {
    Eigen::VectorXd da;
    Eigen::MatrixXd dW;
    Eigen::VectorXd db;
    double db0 = 0.0;

    static Gradients zero_like(const NetParams& p);
    void set_zero();
    bool all_finite() const;
};

double forward(const NetParams& p, const Activation& act, const Eigen::VectorXd& x);

/// Row r of the result equals forward(p, act, X.row(r)) to the last bit:
/// both paths run the identical per-row kernel.
Eigen::VectorXd forward_batch(const NetParams& p, const Activation& act,
                              const Eigen::MatrixXd& X);

struct BackwardResult {
    Gradients grads;
    double risk = 0.0;     // (1/2n) sum l + (lambda/2)(|a|^2 + |W|^2)
    double fit_risk = 0.0; // (1/2n) sum l
};

/// Exact gradient of the regularized empirical risk over the batch. The
/// weight-decay term contributes lambda*a and lambda*W; biases are untouched.
BackwardResult backward(const NetParams& p, const Activation& act, LossKind loss,
                        double lambda, const Dataset& batch);

/// In-place variant over selected rows of (X, y); `grads` must be
/// shape-matched and is overwritten. Rows are reduced in index order.
void backward_into(const NetParams& p, const Activation& act, LossKind loss,
                   double lambda, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const int* rows, int count, Gradients& grads,
                   double& risk, double& fit_risk);

/// (1/2)(|a|^2 + |W|_F^2); biases excluded.
double weight_decay(const NetParams& p);

/// sum_i |a_i| * |w_i|_2. Never exceeds weight_decay; equal iff balanced.
double path_norm(const NetParams& p);

/// Fully-connected network of depth > 2: activation on every hidden layer,
/// linear scalar output.
struct DeepNetParams {
    std::vector<Eigen::MatrixXd> weights; // layer l maps width_{l} -> width_{l+1}
    std::vector<Eigen::VectorXd> biases;

    Eigen::Index input_dim() const { return weights.empty() ? 0 : weights.front().cols(); }
    void check_consistent() const; // shapes compose, final output dim 1
};

double deep_forward(const DeepNetParams& p, const Activation& act, const Eigen::VectorXd& x);

struct DeepBackwardResult {
    std::vector<Eigen::MatrixXd> dweights;
    std::vector<Eigen::VectorXd> dbiases;
    double risk = 0.0;
    double fit_risk = 0.0;
};

/// Gradient of the same regularized risk for the deep model; weight decay
/// applies to every weight matrix, never to biases.
DeepBackwardResult deep_backward(const DeepNetParams& p, const Activation& act, LossKind loss,
                                 double lambda, const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y, const int* rows, int count);

/// Checkpoint format: CSV `kind,i,j,value` with kind in {a, W, b, b0}.
/// Values round-trip bit-exactly (shortest decimal representation).
void save_checkpoint(const std::filesystem::path& path, const NetParams& p);
NetParams load_checkpoint(const std::filesystem::path& path);

} // namespace minnorm

#endif
