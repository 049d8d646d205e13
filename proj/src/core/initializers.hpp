#ifndef MINNORM_INITIALIZERS_HPP
#define MINNORM_INITIALIZERS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "core/nn_model.hpp"
#include "core/rng.hpp"

namespace minnorm {

/// Xavier draws use fan-in + fan-out: uniform on a symmetric interval of
/// half-width gain*sqrt(6/(n_in+n_out)), or normal with standard deviation
/// gain*sqrt(2/(n_in+n_out)). He draws are normal with standard deviation
/// sqrt(2/n_in) of the tensor's own fan-in and take no gain.
struct InitScheme {
    enum class Kind { xavier_uniform, xavier_normal, he };
    Kind kind = Kind::xavier_uniform;
    double gain = 1.0;
};

InitScheme init_scheme_from_string(std::string_view kind, double gain);
std::string init_scheme_to_string(const InitScheme& s);

/// Fills a rows x cols tensor from the given stream. Entry (i, j) consumes
/// draws in row-major order; the stream layout is part of the
/// reproducibility contract.
Eigen::MatrixXd init_layer(const InitScheme& scheme, int n_in, int n_out,
                           int rows, int cols, RngStream stream);

/// Builds a width-m network on d inputs. Streams are derived from the seed
/// with tags "init.a", "init.W", "init.b"; a uses fans (m, 1), W and b use
/// (d, m). b0 starts at 0.
NetParams init_net(const InitScheme& scheme, int m, int d, std::uint64_t seed);

/// Hidden widths all equal to m, depth = number of hidden layers; layer l
/// draws from tag "init.deep.W<l>" / "init.deep.b<l>".
DeepNetParams init_deep_net(const InitScheme& scheme, int m, int d, int depth,
                            std::uint64_t seed);

} // namespace minnorm

#endif
