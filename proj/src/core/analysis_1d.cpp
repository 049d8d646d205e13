#include "core/analysis_1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/common.hpp"

namespace minnorm {

namespace {
constexpr double kKinkMergeTol = 1e-12;
}

void PiecewiseLinear::build_values() const {
    if (bp_values_.size() == breakpoints.size()) return;
    bp_values_.assign(breakpoints.size(), 0.0);
    if (breakpoints.empty()) return;
    // Anchor at x = 0, integrate slopes outwards to every breakpoint.
    const auto first_right =
        std::upper_bound(breakpoints.begin(), breakpoints.end(), 0.0) - breakpoints.begin();
    // Walk right from 0.
    double v = value_at_0;
    double xprev = 0.0;
    for (std::size_t k = std::size_t(first_right); k < breakpoints.size(); ++k) {
        v += slopes[k] * (breakpoints[k] - xprev);
        bp_values_[k] = v;
        xprev = breakpoints[k];
    }
    // Walk left from 0.
    v = value_at_0;
    xprev = 0.0;
    for (std::size_t k = std::size_t(first_right); k-- > 0;) {
        v -= slopes[k + 1] * (xprev - breakpoints[k]);
        bp_values_[k] = v;
        xprev = breakpoints[k];
    }
}

double PiecewiseLinear::eval(double x) const {
    if (breakpoints.empty()) return value_at_0 + slopes[0] * x;
    build_values();
    const auto cell =
        std::upper_bound(breakpoints.begin(), breakpoints.end(), x) - breakpoints.begin();
    if (cell == 0) return bp_values_[0] + slopes[0] * (x - breakpoints[0]);
    return bp_values_[std::size_t(cell - 1)] +
           slopes[std::size_t(cell)] * (x - breakpoints[std::size_t(cell - 1)]);
}

PiecewiseLinear make_pwl(std::vector<double> breakpoints, std::vector<double> slopes,
                         double value_at_0) {
    if (slopes.size() != breakpoints.size() + 1)
        throw shape_error("piecewise-linear function needs one more slope than breakpoints");
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
        throw domain_error("breakpoints must be sorted");
    PiecewiseLinear f;
    f.breakpoints = std::move(breakpoints);
    f.slopes = std::move(slopes);
    f.value_at_0 = value_at_0;
    f.build_values(); // eager, so eval stays const and thread-safe
    return f;
}

PiecewiseLinear extract_pwl(const NetParams& p, const Activation& act) {
    if (p.input_dim() != 1)
        throw domain_error("piecewise-linear extraction requires a 1D network");
    const double leak = act.kind == Activation::Kind::leaky_relu ? act.slope : 0.0;

    struct Kink {
        double pos;
        double delta; // slope jump crossing left -> right
    };
    std::vector<Kink> kinks;
    double leftmost_slope = 0.0;
    for (Eigen::Index i = 0; i < p.width(); ++i) {
        const double w = p.W(i, 0);
        const double aw = p.a[i] * w;
        if (w == 0.0) continue; // constant contribution, folded into value_at_0
        // For w > 0 the neuron is active right of the kink, contributing the
        // leak slope on the left; for w < 0 it is active on the left.
        leftmost_slope += w > 0.0 ? leak * aw : aw;
        kinks.push_back({-p.b[i] / w, (1.0 - leak) * p.a[i] * std::abs(w)});
    }
    std::sort(kinks.begin(), kinks.end(),
              [](const Kink& l, const Kink& r) { return l.pos < r.pos; });

    PiecewiseLinear f;
    f.slopes.push_back(leftmost_slope);
    for (const auto& k : kinks) {
        if (!f.breakpoints.empty() && k.pos - f.breakpoints.back() <= kKinkMergeTol) {
            f.slopes.back() += k.delta;
        } else {
            f.breakpoints.push_back(k.pos);
            f.slopes.push_back(f.slopes.back() + k.delta);
        }
    }
    f.value_at_0 = forward(p, act, Eigen::VectorXd::Zero(1));
    f.build_values();
    return f;
}

TvResult tv_of_slope(const PiecewiseLinear& f) {
    TvResult r;
    for (std::size_t k = 0; k + 1 < f.slopes.size(); ++k)
        r.tv += std::abs(f.slopes[k + 1] - f.slopes[k]);
    const auto [lo, hi] = std::minmax_element(f.slopes.begin(), f.slopes.end());
    r.seminorm_hypothesis = *lo <= 0.0 && 0.0 <= *hi;
    return r;
}

double convexity_defect(const PiecewiseLinear& f) {
    double d = 0.0;
    for (std::size_t k = 0; k + 1 < f.slopes.size(); ++k)
        d += std::max(0.0, f.slopes[k] - f.slopes[k + 1]);
    return d;
}

MinNormReport minnorm_distance(const PiecewiseLinear& f, const Dataset& data) {
    if (data.dim() != 1) throw domain_error("minnorm_distance requires 1D data");
    const Eigen::Index n = data.n();
    if (n < 2) throw domain_error("minnorm_distance needs at least 2 data points");
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        if (!(data.X(i, 0) < data.X(i + 1, 0)))
            throw domain_error("data x-values must be strictly increasing");
    if (!(data.y[1] < data.y[0]))
        throw domain_error("minimum-norm characterization needs y_1 < y_0");
    if (!(data.y[n - 1] > data.y[n - 2]))
        throw domain_error("minimum-norm characterization needs y_n > y_{n-1}");

    MinNormReport rep;
    for (Eigen::Index i = 0; i < n; ++i)
        rep.data_misfit = std::max(rep.data_misfit, std::abs(f.eval(data.X(i, 0)) - data.y[i]));
    rep.convexity_defect = convexity_defect(f);
    const double left_secant = (data.y[1] - data.y[0]) / (data.X(1, 0) - data.X(0, 0));
    const double right_secant = (data.y[n - 1] - data.y[n - 2]) / (data.X(n - 1, 0) - data.X(n - 2, 0));
    rep.left_slope_dev = std::abs(f.slopes.front() - left_secant);
    rep.right_slope_dev = std::abs(f.slopes.back() - right_secant);
    rep.barron_seminorm = tv_of_slope(f).tv;
    return rep;
}

Spline natural_cubic_spline(const Dataset& data) {
    if (data.dim() != 1) throw domain_error("spline requires 1D data");
    const Eigen::Index n = data.n();
    if (n < 2) throw domain_error("spline needs at least 2 knots");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index l, Eigen::Index r) { return data.X(l, 0) < data.X(r, 0); });

    Spline s;
    s.x.resize(std::size_t(n));
    s.y.resize(std::size_t(n));
    for (std::size_t i = 0; i < std::size_t(n); ++i) {
        s.x[i] = data.X(order[i], 0);
        s.y[i] = data.y[order[i]];
    }
    for (std::size_t i = 0; i + 1 < s.x.size(); ++i)
        if (!(s.x[i] < s.x[i + 1])) throw domain_error("spline knots must be distinct");

    // Natural boundary: M_0 = M_{K} = 0; interior M from the C^1 conditions,
    // solved with the Thomas algorithm.
    const std::size_t K = s.x.size() - 1;
    s.m2.assign(K + 1, 0.0);
    if (K >= 2) {
        const std::size_t inner = K - 1;
        std::vector<double> diag(inner), upper(inner), rhs(inner);
        for (std::size_t i = 1; i <= inner; ++i) {
            const double hl = s.x[i] - s.x[i - 1];
            const double hr = s.x[i + 1] - s.x[i];
            diag[i - 1] = (hl + hr) / 3.0;
            upper[i - 1] = hr / 6.0;
            rhs[i - 1] = (s.y[i + 1] - s.y[i]) / hr - (s.y[i] - s.y[i - 1]) / hl;
        }
        for (std::size_t i = 1; i < inner; ++i) {
            const double lower = (s.x[i + 1] - s.x[i]) / 6.0; // == upper[i-1]
            const double w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        s.m2[inner] = rhs[inner - 1] / diag[inner - 1];
        for (std::size_t i = inner - 1; i >= 1; --i) {
            s.m2[i] = (rhs[i - 1] - upper[i - 1] * s.m2[i + 1]) / diag[i - 1];
            if (i == 1) break;
        }
    }
    return s;
}

namespace {

std::size_t spline_cell(const Spline& s, double t) {
    // Clamped cell index: queries beyond the ends use the boundary cell.
    const auto it = std::upper_bound(s.x.begin(), s.x.end(), t);
    const std::size_t idx = std::size_t(it - s.x.begin());
    if (idx == 0) return 0;
    return std::min(idx - 1, s.x.size() - 2);
}

} // namespace

double Spline::eval(double t) const {
    if (t <= x.front()) return y.front() + derivative(x.front()) * (t - x.front());
    if (t >= x.back()) return y.back() + derivative(x.back()) * (t - x.back());
    const std::size_t i = spline_cell(*this, t);
    const double h = x[i + 1] - x[i];
    const double dl = x[i + 1] - t, dr = t - x[i];
    return m2[i] * dl * dl * dl / (6.0 * h) + m2[i + 1] * dr * dr * dr / (6.0 * h) +
           (y[i] / h - m2[i] * h / 6.0) * dl + (y[i + 1] / h - m2[i + 1] * h / 6.0) * dr;
}

double Spline::derivative(double t) const {
    const std::size_t i = spline_cell(*this, t);
    const double h = x[i + 1] - x[i];
    const double tt = std::clamp(t, x[i], x[i + 1]);
    const double dl = x[i + 1] - tt, dr = tt - x[i];
    return -m2[i] * dl * dl / (2.0 * h) + m2[i + 1] * dr * dr / (2.0 * h) +
           (y[i + 1] - y[i]) / h - (m2[i + 1] - m2[i]) * h / 6.0;
}

double spline_eval(const Spline& s, double t) { return s.eval(t); }

double spline_energy(const Spline& s) {
    // f'' is linear on each interval: the integral of its square over a cell
    // of width h with endpoint values A, B is h (A^2 + A B + B^2) / 3.
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
        const double h = s.x[i + 1] - s.x[i];
        e += h * (s.m2[i] * s.m2[i] + s.m2[i] * s.m2[i + 1] + s.m2[i + 1] * s.m2[i + 1]) / 3.0;
    }
    return e;
}

double spline_system_residual(const Spline& s) {
    double worst = std::abs(s.m2.front());
    worst = std::max(worst, std::abs(s.m2.back()));
    for (std::size_t i = 1; i + 1 < s.x.size(); ++i) {
        const double hl = s.x[i] - s.x[i - 1];
        const double hr = s.x[i + 1] - s.x[i];
        const double lhs = hl / 6.0 * s.m2[i - 1] + (hl + hr) / 3.0 * s.m2[i] + hr / 6.0 * s.m2[i + 1];
        const double rhs = (s.y[i + 1] - s.y[i]) / hr - (s.y[i] - s.y[i - 1]) / hl;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace minnorm
