#ifndef MINNORM_CONFIG_HPP
#define MINNORM_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "core/initializers.hpp"
#include "core/losses.hpp"
#include "core/optimizers.hpp"

namespace minnorm {

/// lo:hi:count grid specification.
struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    int count = 2;

    std::vector<double> linear_values() const;
};

GridSpec parse_grid(std::string_view s);

struct SweepTriple {
    int m = 0;
    double lambda = 0.0;
    int n = 0; // 0 = keep the base dataset size
};

/// Flat key=value run configuration ('#' comments, dotted keys, unknown
/// keys rejected). See README for the key reference.
struct RunConfig {
    // data.*
    std::string data_kind = "abs1d"; // abs1d | radial_bump | file
    int k_per_side = 15;
    double data_lo = 1.0;
    double data_hi = 2.0;
    bool inclusive_endpoints = false;
    int data_n = 0;
    int data_d = 3;
    double m1 = 0.2;
    double m2 = 0.2;
    double r_lo = 1.0;
    double r_hi = 7.0;
    std::string data_path;

    // model.*
    int m = 200;
    Activation activation = Activation::relu();
    bool frozen_inner = false;
    int depth = 1; // hidden layers; >= 2 trains the deep variant

    // init.*, optim.*, loss, lambda
    InitScheme init;
    OptimizerSpec optim;
    int epochs = 0; // exactly one of epochs/steps is set
    long steps = 0;
    LossKind loss = LossKind::mse;
    double lambda = 0.0;

    // analysis.*
    GridSpec radii{0.0, 7.0, 141};
    int n_dirs = 500;
    std::string reference_profile;
    GridSpec rescale_grid{0.125, 2.0, 200};

    // run control
    std::uint64_t seed = 0;
    std::string output_dir;
    bool single_thread = true;

    // sweep.*
    std::vector<SweepTriple> sweep_triples;
    int sweep_seeds = 5;

    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    void validate() const;

    /// Full effective state as sorted key=value lines; hashing this ties the
    /// manifest to the configuration.
    std::string canonical_string() const;
    std::uint64_t hash() const;
};

} // namespace minnorm

#endif
