#ifndef MINNORM_ANALYSIS_RADIAL_HPP
#define MINNORM_ANALYSIS_RADIAL_HPP

#include <filesystem>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "core/rng.hpp"

namespace minnorm {

/// Per-radius mean and population standard deviation of a function over
/// random directions.
struct RadialProfile {
    std::vector<double> radii; // strictly increasing
    std::vector<double> mean;
    std::vector<double> std_dev;
    int n_dirs = 0;
    int d = 0;
    bool has_std = true; // false when loaded from a file without a std column
};

using PointEvaluator = std::function<double(const Eigen::VectorXd&)>;

/// Monte-Carlo radial statistics. One set of directions is drawn (direction
/// j from stream.substream(j)) and shared across all radii, which couples
/// the variance across radii and keeps profiles smooth in r.
RadialProfile radial_stats(const PointEvaluator& evaluate, int d,
                           const std::vector<double>& radii, int n_dirs, RngStream stream);

/// CSV columns r,mean[,std]; radii must be strictly increasing. A file
/// without the std column loads with std 0 and has_std = false.
void save_profile(const std::filesystem::path& path, const RadialProfile& profile);
RadialProfile load_profile(const std::filesystem::path& path);

/// Linear interpolation on the grid, constant extension beyond both ends.
double eval_profile(const RadialProfile& profile, double r);

/// Log-spaced search grid for the rescale factor.
struct RescaleGrid {
    double lo = 0.125;
    double hi = 2.0;
    int count = 200;

    std::vector<double> values() const;
};

struct RescaleFit {
    double r = 1.0;
    double l2_discrepancy = 0.0;
    RescaleGrid grid;
};

/// Least-squares fit of the rescale factor: r* minimizes the trapezoid-
/// weighted squared gap between the measured mean and reference(r * rho)
/// over the measured radii. Ties break toward the smaller r.
RescaleFit fit_rescale(const RadialProfile& measured, const RadialProfile& reference,
                       const RescaleGrid& grid);

} // namespace minnorm

#endif
