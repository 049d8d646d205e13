#ifndef MINNORM_DATASET_HPP
#define MINNORM_DATASET_HPP

#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace minnorm {

struct DatasetMeta {
    std::string generator; // "abs1d", "radial_bump", "file", ...
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
};

/// Input matrix X (n x d) with labels y (n) and provenance.
struct Dataset {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    DatasetMeta meta;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index dim() const { return X.cols(); }
};

} // namespace minnorm

#endif
