#ifndef MINNORM_THEORY_CHECKS_HPP
#define MINNORM_THEORY_CHECKS_HPP

#include <string>
#include <string_view>

#include "core/dataset.hpp"
#include "core/nn_model.hpp"
#include "core/rng.hpp"

namespace minnorm {

/// Measured quantity vs theoretical bound; satisfied iff slack >= 0.
struct BoundReport {
    double quantity = 0.0;
    double bound = 0.0;
    double slack = 0.0;
    bool satisfied = false;

    static BoundReport make(double quantity, double bound) {
        return {quantity, bound, bound - quantity, bound - quantity >= 0.0};
    }
};

/// (1 + 3 sqrt 2) Q max_i |x_i| / sqrt(n): upper bound on the empirical
/// Rademacher complexity of the Barron ball of radius Q (functions vanishing
/// at the origin).
double rademacher_bound(const Dataset& data, double Q);

struct RademacherConfig {
    double Q = 1.0;
    int n_eps = 20;        // Rademacher sign draws
    int n_candidates = 200; // sampled neurons per sign draw
    int refine_steps = 20; // coordinate-ascent sweeps on the best neuron

    void validate() const;
};

/// Monte-Carlo lower estimate of the empirical Rademacher complexity: the
/// supremum over the ball is attained at single neurons a (act(w.x+b) -
/// act(b)) with a^2 + |w|^2 = 2Q and |b| <= sqrt(Q) max|x_i|, so we sample
/// balanced neurons, locally ascend, and average over sign vectors. Always
/// at most rademacher_bound.
double rademacher_estimate(const Dataset& data, const RademacherConfig& cfg, RngStream stream);

/// 4 [f*]_B^2 / m * mean|x_i|^2 + lambda [f*]_B: what the direct
/// approximation theorem guarantees an empirical risk minimizer can reach.
double direct_approx_bound(double barron_norm_f_star, const Dataset& data, int m, double lambda);

/// Compares the achieved regularized risk of trained parameters against
/// direct_approx_bound. An unsatisfied report flags a training run that
/// failed to reach near-minimal risk; it is not an error.
BoundReport erm_bound_check(const NetParams& trained, const Activation& act,
                            const Dataset& data, double lambda, double barron_norm_f_star,
                            LossKind loss = LossKind::mse);

/// Unregularized fit risk on test minus train, both in the (1/2n) sum
/// normalization.
double generalization_gap(const NetParams& p, const Activation& act, const Dataset& train,
                          const Dataset& test, LossKind loss = LossKind::mse);

enum class SubgaussianKind { max_mean, max_quantile, mean_square };
SubgaussianKind subgaussian_kind_from_string(std::string_view s);

/// Monte-Carlo check of the sub-Gaussian lemmas on standard Gaussian data
/// (sigma = 1 by the 1-Lipschitz concentration of the norm):
///   max_mean:     E max_i |x_i| <= E|x| + sigma sqrt(2 log n)
///   max_quantile: P(max_i |x_i| > E|x| + sigma sqrt(2 log(n/delta))) <= delta
///   mean_square:  P(mean |x_i|^2 > E|x|^2 + 8 sigma^2 sqrt(log(1/delta)/n)) <= delta
/// The reported quantity is the Monte-Carlo estimate minus 3 standard
/// errors, so "satisfied" is a one-sided 3-sigma test of the lemma.
BoundReport subgaussian_check(SubgaussianKind kind, int d, int n, double sigma, int trials,
                              double delta, RngStream stream);

/// E|x| for standard Gaussian x in R^d (the chi-distribution mean).
double chi_mean(int d);

} // namespace minnorm

#endif
