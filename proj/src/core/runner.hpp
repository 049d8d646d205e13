#ifndef MINNORM_RUNNER_HPP
#define MINNORM_RUNNER_HPP

#include <filesystem>
#include <map>
#include <string>

#include "core/analysis_1d.hpp"
#include "core/analysis_radial.hpp"
#include "core/config.hpp"
#include "core/dataset.hpp"

namespace minnorm {

/// Flat numeric summary of a finished run, plus a few text entries
/// ("run_dir"). Keys are documented in the README.
struct RunSummary {
    std::map<std::string, double> values;
    std::map<std::string, std::string> texts;
    bool failed = false;

    double get(const std::string& key) const;
    bool has(const std::string& key) const { return values.count(key) != 0; }
};

/// Trains per the config, runs the analysis stage matching the data kind,
/// and writes the artifact directory atomically (write to <out>.tmp, then
/// rename). A numerically diverged run produces a directory with
/// status=failed in the manifest and a summary with failed = true.
RunSummary run_training(const RunConfig& cfg);

/// One run per sweep triple and seed; per-triple medians of the minimum-norm
/// report components land in sweep_report.csv. Individual run failures are
/// recorded and the sweep continues.
RunSummary run_sweep(const RunConfig& cfg);

/// Regenerates figure.svg from the stored artifacts of a finished run.
void render_run(const std::filesystem::path& run_dir, const std::filesystem::path& out_svg);

/// Dataset construction per config (used by run_training and the CLI).
Dataset build_dataset(const RunConfig& cfg);

} // namespace minnorm

#endif
