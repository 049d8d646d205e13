#include "core/theory_checks.hpp"

#include <algorithm>
#include <cmath>

#include "core/common.hpp"
#include "core/datagen.hpp"

namespace minnorm {

namespace {
const double kRademacherConstant = 1.0 + 3.0 * std::sqrt(2.0);

double max_row_norm(const Dataset& data) {
    double R = 0.0;
    for (Eigen::Index i = 0; i < data.n(); ++i)
        R = std::max(R, data.X.row(i).norm());
    return R;
}
} // namespace

double rademacher_bound(const Dataset& data, double Q) {
    if (data.n() == 0) throw domain_error("rademacher_bound needs a nonempty dataset");
    if (Q < 0.0) throw domain_error("Q must be nonnegative");
    return kRademacherConstant * Q * max_row_norm(data) / std::sqrt(double(data.n()));
}

void RademacherConfig::validate() const {
    if (!(Q > 0.0) || n_eps < 1 || n_candidates < 1 || refine_steps < 0)
        throw domain_error("invalid Rademacher estimator configuration");
}

namespace {

// |(sqrt(Q)/n) sum_i eps_i (relu(w.x_i + b) - relu(b))|; the outer weight's
// optimal sign is absorbed by the absolute value.
double neuron_score(const Eigen::MatrixXd& X, const std::vector<double>& eps, double sqrtQ,
                    const Eigen::VectorXd& w, double b) {
    double s = 0.0;
    const double rb = std::max(b, 0.0);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double z = w.dot(X.row(i)) + b;
        s += eps[std::size_t(i)] * (std::max(z, 0.0) - rb);
    }
    return std::abs(sqrtQ * s / double(X.rows()));
}

} // namespace

double rademacher_estimate(const Dataset& data, const RademacherConfig& cfg, RngStream stream) {
    cfg.validate();
    if (data.n() == 0) throw domain_error("rademacher_estimate needs a nonempty dataset");
    const int d = int(data.dim());
    const double sqrtQ = std::sqrt(cfg.Q);
    const double bias_cap = sqrtQ * max_row_norm(data);

    double total = 0.0;
    std::vector<double> eps(static_cast<std::size_t>(data.n()));
    for (int e = 0; e < cfg.n_eps; ++e) {
        RngStream draw = stream.substream(std::uint64_t(e));
        for (auto& v : eps) v = draw.uniform01() < 0.5 ? -1.0 : 1.0;

        Eigen::VectorXd best_w = Eigen::VectorXd::Zero(d);
        double best_b = 0.0;
        double best = 0.0; // the zero function is always admissible
        for (int c = 0; c < cfg.n_candidates; ++c) {
            Eigen::VectorXd w = sqrtQ * sample_sphere(d, draw);
            const double b = draw.uniform(-bias_cap, bias_cap);
            const double s = neuron_score(data.X, eps, sqrtQ, w, b);
            if (s > best) {
                best = s;
                best_w = w;
                best_b = b;
            }
        }

        // Coordinate ascent with a halving step, staying on |w| = sqrt(Q)
        // and |b| <= bias_cap so every probe remains a member function.
        for (int t = 0; t < cfg.refine_steps; ++t) {
            const double dw = sqrtQ * std::pow(0.5, 1 + t % 12);
            const double db = std::max(bias_cap, 1e-12) * std::pow(0.5, 1 + t % 12);
            for (int c = 0; c < d; ++c) {
                for (double sgn : {1.0, -1.0}) {
                    Eigen::VectorXd w = best_w;
                    w[c] += sgn * dw;
                    const double norm = w.norm();
                    if (norm == 0.0) continue;
                    w *= sqrtQ / norm;
                    const double s = neuron_score(data.X, eps, sqrtQ, w, best_b);
                    if (s > best) {
                        best = s;
                        best_w = w;
                    }
                }
            }
            for (double sgn : {1.0, -1.0}) {
                const double b = std::clamp(best_b + sgn * db, -bias_cap, bias_cap);
                const double s = neuron_score(data.X, eps, sqrtQ, best_w, b);
                if (s > best) {
                    best = s;
                    best_b = b;
                }
            }
        }
        total += best;
    }
    return total / cfg.n_eps;
}

double direct_approx_bound(double barron_norm_f_star, const Dataset& data, int m, double lambda) {
    if (m < 1) throw domain_error("direct_approx_bound needs m >= 1");
    if (lambda < 0.0) throw domain_error("lambda must be nonnegative");
    if (data.n() == 0) throw domain_error("direct_approx_bound needs a nonempty dataset");
    const double mean_sq = data.X.squaredNorm() / double(data.n());
    return 4.0 * barron_norm_f_star * barron_norm_f_star / double(m) * mean_sq +
           lambda * barron_norm_f_star;
}

BoundReport erm_bound_check(const NetParams& trained, const Activation& act,
                            const Dataset& data, double lambda, double barron_norm_f_star,
                            LossKind loss) {
    const Eigen::VectorXd f = forward_batch(trained, act, data.X);
    double loss_sum = 0.0;
    for (Eigen::Index i = 0; i < data.n(); ++i)
        loss_sum += loss_value(loss, f[i], data.y[i]);
    const double risk = loss_sum / (2.0 * double(data.n())) + lambda * weight_decay(trained);
    return BoundReport::make(risk, direct_approx_bound(barron_norm_f_star, data,
                                                       int(trained.width()), lambda));
}

double generalization_gap(const NetParams& p, const Activation& act, const Dataset& train,
                          const Dataset& test, LossKind loss) {
    auto fit = [&](const Dataset& ds) {
        if (ds.n() == 0) throw domain_error("generalization_gap needs nonempty datasets");
        const Eigen::VectorXd f = forward_batch(p, act, ds.X);
        double s = 0.0;
        for (Eigen::Index i = 0; i < ds.n(); ++i) s += loss_value(loss, f[i], ds.y[i]);
        return s / (2.0 * double(ds.n()));
    };
    return fit(test) - fit(train);
}

SubgaussianKind subgaussian_kind_from_string(std::string_view s) {
    if (s == "max_mean") return SubgaussianKind::max_mean;
    if (s == "max_quantile") return SubgaussianKind::max_quantile;
    if (s == "mean_square") return SubgaussianKind::mean_square;
    throw domain_error("unknown sub-Gaussian check '" + std::string(s) + "'");
}

double chi_mean(int d) {
    return std::sqrt(2.0) * std::exp(std::lgamma((d + 1) / 2.0) - std::lgamma(d / 2.0));
}

BoundReport subgaussian_check(SubgaussianKind kind, int d, int n, double sigma, int trials,
                              double delta, RngStream stream) {
    if (d < 1 || n < 1) throw domain_error("subgaussian_check needs d, n >= 1");
    if (trials < 1000) throw domain_error("subgaussian_check needs at least 1000 trials");
    if (kind != SubgaussianKind::max_mean && !(delta > 0.0 && delta < 1.0))
        throw domain_error("delta must lie in (0, 1)");

    const double norm_mean = chi_mean(d);
    double threshold = 0.0, bound = 0.0;
    switch (kind) {
    case SubgaussianKind::max_mean:
        bound = norm_mean + sigma * std::sqrt(2.0 * std::log(double(n)));
        break;
    case SubgaussianKind::max_quantile:
        threshold = norm_mean + sigma * std::sqrt(2.0 * std::log(double(n) / delta));
        bound = delta;
        break;
    case SubgaussianKind::mean_square:
        threshold = double(d) + 8.0 * sigma * sigma * std::sqrt(std::log(1.0 / delta) / double(n));
        bound = delta;
        break;
    }

    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
        RngStream trial = stream.substream(std::uint64_t(t));
        double stat = 0.0;
        if (kind == SubgaussianKind::mean_square) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) {
                    const double g = trial.normal();
                    acc += g * g;
                }
            stat = acc / double(n) > threshold ? 1.0 : 0.0;
        } else {
            double maxnorm = 0.0;
            for (int i = 0; i < n; ++i) {
                double sq = 0.0;
                for (int j = 0; j < d; ++j) {
                    const double g = trial.normal();
                    sq += g * g;
                }
                maxnorm = std::max(maxnorm, std::sqrt(sq));
            }
            stat = kind == SubgaussianKind::max_mean ? maxnorm
                                                     : (maxnorm > threshold ? 1.0 : 0.0);
        }
        sum += stat;
        sumsq += stat * stat;
    }
    const double mc_mean = sum / trials;
    const double var = std::max(0.0, sumsq / trials - mc_mean * mc_mean);
    const double stderr3 = 3.0 * std::sqrt(var / trials);
    return BoundReport::make(mc_mean - stderr3, bound);
}

} // namespace minnorm
