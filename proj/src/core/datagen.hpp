#ifndef MINNORM_DATAGEN_HPP
#define MINNORM_DATAGEN_HPP

#include <cstdint>
#include <filesystem>

#include <Eigen/Dense>

#include "core/dataset.hpp"
#include "core/rng.hpp"

namespace minnorm {

/// Mixture mu1 + mu2 + mu3: point mass m1 at the origin, mass m2 uniform on
/// the unit sphere, remaining mass radial with |x| uniform on [r_lo, r_hi].
/// r_lo >= 1 keeps the punctured unit ball empty.
struct RadialMixtureConfig {
    int d = 3;
    double m1 = 0.2;
    double m2 = 0.2;
    double r_lo = 1.0;
    double r_hi = 7.0;

    void validate() const;
};

/// Uniform point on S^{d-1} (normalized Gaussian). d = 1 gives +-1.
Eigen::VectorXd sample_sphere(int d, RngStream& stream);

/// n x d sample matrix. Row i draws from stream.substream(i), so the output
/// is independent of evaluation order.
Eigen::MatrixXd sample_radial_mixture(const RadialMixtureConfig& cfg, int n, RngStream stream);

/// Bump labels: 1 at origin rows, 0 at rows with |x| >= 1 - 1e-9. A row
/// strictly inside the punctured unit ball has no defined label and is a
/// domain error.
Eigen::VectorXd label_bump(const Eigen::MatrixXd& X);

/// Radial-bump dataset with metadata; rows drawn from (seed, "data.x").
Dataset make_radial_bump_dataset(const RadialMixtureConfig& cfg, int n, std::uint64_t seed);

/// Symmetric grid of 2k points with labels |x|: the k positive points sit
/// strictly inside (lo, hi) at lo + j*(hi-lo)/(k+1), mirrored to negatives.
/// With inclusive_endpoints the grid is lo + j*(hi-lo)/(k-1), j = 0..k-1.
Dataset dataset_1d_abs(int k_per_side, double lo, double hi, bool inclusive_endpoints = false);

/// CSV with header x_1,..,x_d,y; values round-trip bit-exactly.
void save_dataset(const std::filesystem::path& path, const Dataset& ds);
Dataset load_dataset(const std::filesystem::path& path);

} // namespace minnorm

#endif
