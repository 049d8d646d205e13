#ifndef MINNORM_ANALYSIS_1D_HPP
#define MINNORM_ANALYSIS_1D_HPP

#include <vector>

#include "core/dataset.hpp"
#include "core/nn_model.hpp"

namespace minnorm {

/// Continuous piecewise-linear function: K sorted breakpoints, K+1 cell
/// slopes and the value at x = 0 as the anchor.
struct PiecewiseLinear {
    std::vector<double> breakpoints;
    std::vector<double> slopes;
    double value_at_0 = 0.0;

    double eval(double x) const;

private:
    friend PiecewiseLinear extract_pwl(const NetParams&, const Activation&);
    friend PiecewiseLinear make_pwl(std::vector<double>, std::vector<double>, double);
    mutable std::vector<double> bp_values_; // values at breakpoints, lazily built
    void build_values() const;
};

/// Constructor helper used by tests and the spline comparison.
PiecewiseLinear make_pwl(std::vector<double> breakpoints, std::vector<double> slopes,
                         double value_at_0);

/// Exact algebraic conversion of a width-m net on 1 input: kinks at -b_i/w_i
/// (merged within 1e-12), zero-w_i neurons fold into the constant.
/// Requires d == 1.
PiecewiseLinear extract_pwl(const NetParams& p, const Activation& act);

struct TvResult {
    double tv = 0.0;
    /// True when min slope <= 0 <= max slope; only then is the total
    /// variation of the slope the Barron semi-norm of the function.
    bool seminorm_hypothesis = false;
};

/// Sum of |slope jumps| over the kinks.
TvResult tv_of_slope(const PiecewiseLinear& f);

/// Sum of negative slope increments; zero iff the function is convex.
double convexity_defect(const PiecewiseLinear& f);

/// Distances from the conditions characterizing minimum-norm interpolants of
/// convex 1D data: all fields zero exactly when the function interpolates,
/// is convex, and its outermost slopes match the data's edge secants.
struct MinNormReport {
    double data_misfit = 0.0;
    double convexity_defect = 0.0;
    double left_slope_dev = 0.0;
    double right_slope_dev = 0.0;
    double barron_seminorm = 0.0;
};

/// Requires 1D data with strictly increasing x, y[1] < y[0] and
/// y[n-1] > y[n-2]; a violated inequality is named in the error.
MinNormReport minnorm_distance(const PiecewiseLinear& f, const Dataset& data);

/// Natural cubic spline: C^2 interpolant with vanishing second derivative at
/// the end knots, linear extension beyond them.
struct Spline {
    std::vector<double> x;  // knots, strictly increasing
    std::vector<double> y;  // values
    std::vector<double> m2; // second derivatives at knots (natural: ends 0)

    double eval(double t) const;
    double derivative(double t) const;
};

Spline natural_cubic_spline(const Dataset& data);
double spline_eval(const Spline& s, double t);

/// Integral of f'' squared, in closed form from the knot second derivatives.
double spline_energy(const Spline& s);

/// Max absolute residual of the C^1 tridiagonal system; a solve-quality
/// diagnostic used by the tests.
double spline_system_residual(const Spline& s);

} // namespace minnorm

#endif
