// Command-line front end. Links only the public C API.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minnorm.h"

namespace {

int exit_code_for(mn_status st) {
    switch (st) {
    case MN_OK: return 0;
    case MN_ERR_NUMERIC: return 2;
    case MN_ERR_CHECK: return 3;
    default: return 1; // config, io, invalid usage
    }
}

int fail(mn_status st) {
    std::fprintf(stderr, "error: %s\n", mn_last_error());
    return exit_code_for(st);
}

void print_summary(const mn_summary* s) {
    const char* dir = mn_summary_text(s, "run_dir");
    if (dir) std::printf("run_dir: %s\n", dir);
    for (size_t i = 0; i < mn_summary_size(s); ++i)
        std::printf("%s: %.9g\n", mn_summary_key(s, i), mn_summary_value(s, i));
}

// With --assert, a summary entry named "satisfied" or "monotone" equal to 0
// turns into exit code 3.
int assert_summary(const mn_summary* s, bool do_assert) {
    if (!do_assert) return 0;
    for (const char* key : {"satisfied", "monotone"}) {
        double v = 1.0;
        if (mn_summary_get(s, key, &v) == MN_OK && v == 0.0) {
            std::fprintf(stderr, "assertion failed: %s = 0\n", key);
            return 3;
        }
    }
    return 0;
}

struct CommonOpts {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool single_thread = false;
    bool do_assert = false;
};

mn_status load_config(const CommonOpts& opts, mn_config** cfg) {
    mn_status st = opts.config.empty() ? mn_config_create(cfg)
                                       : mn_config_load(opts.config.c_str(), cfg);
    if (st != MN_OK) return st;
    if (opts.seed_set) {
        st = mn_config_set(*cfg, "seed", std::to_string(opts.seed).c_str());
        if (st != MN_OK) return st;
    }
    if (!opts.out.empty()) {
        st = mn_config_set(*cfg, "output_dir", opts.out.c_str());
        if (st != MN_OK) return st;
    }
    if (opts.single_thread) {
        st = mn_config_set(*cfg, "single_thread", "true");
        if (st != MN_OK) return st;
    }
    return MN_OK;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shallow ReLU networks vs minimum-norm interpolants"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand
    app.set_version_flag("--version", std::string(mn_version()));

    CommonOpts common;
    app.add_option("--config", common.config, "config file (key=value lines)");
    app.add_option("--out", common.out, "output directory override");
    app.add_option("--seed", common.seed, "seed override")
        ->each([&](const std::string&) { common.seed_set = true; });
    app.add_flag("--single-thread", common.single_thread, "force bit-reproducible mode");
    app.add_flag("--assert", common.do_assert, "exit 3 when a checked property fails");

    auto* train = app.add_subcommand("train", "train one network and analyze it");
    auto* sweep = app.add_subcommand("sweep", "run the coupled (m, lambda[, n]) sweep");

    auto* a1d = app.add_subcommand("analyze-1d", "minimum-norm report for a 1D checkpoint");
    std::string checkpoint, data_csv, activation = "relu", report_csv;
    double leaky_slope = 0.1;
    a1d->add_option("--checkpoint", checkpoint, "checkpoint.csv")->required();
    a1d->add_option("--data", data_csv, "dataset.csv")->required();
    a1d->add_option("--activation", activation, "relu|leaky_relu");
    a1d->add_option("--leaky-slope", leaky_slope, "slope of the leaky variant");
    a1d->add_option("--report", report_csv, "append the report row to this CSV");

    auto* arad = app.add_subcommand("analyze-radial", "radial profile of a checkpoint");
    std::string radii = "0:7:141", reference, rescale_grid = "0.125:2:200", profile_csv;
    int n_dirs = 500;
    arad->add_option("--checkpoint", checkpoint, "checkpoint.csv")->required();
    arad->add_option("--activation", activation, "relu|leaky_relu");
    arad->add_option("--leaky-slope", leaky_slope, "slope of the leaky variant");
    arad->add_option("--radii", radii, "radius grid lo:hi:count");
    arad->add_option("--n-dirs", n_dirs, "directions per radius");
    arad->add_option("--reference-profile", reference, "tabulated reference profile CSV");
    arad->add_option("--rescale-grid", rescale_grid, "rescale search grid lo:hi:count");
    arad->add_option("--profile", profile_csv, "write the measured profile here");

    auto* chk = app.add_subcommand("theory-check", "numerical checks of the paper's bounds");
    std::string kind, sg_kind = "max_mean", train_csv, test_csv, loss = "mse";
    std::string checks_csv = "checks.csv";
    double q = 1.0, sigma = 1.0, delta = 0.1, lambda = 0.0, barron = 2.0;
    int n_eps = 20, candidates = 200, refine = 20, dim = 3, n_pts = 100, trials = 10000;
    chk->add_option("--kind", kind, "rademacher|subgaussian|erm-bound|gap")->required();
    chk->add_option("--data", data_csv, "dataset CSV (rademacher, erm-bound)");
    chk->add_option("--q", q, "Barron ball radius");
    chk->add_option("--n-eps", n_eps, "Rademacher sign draws");
    chk->add_option("--candidates", candidates, "sampled neurons per draw");
    chk->add_option("--refine", refine, "ascent sweeps");
    chk->add_option("--sg-kind", sg_kind, "max_mean|max_quantile|mean_square");
    chk->add_option("--d", dim, "input dimension");
    chk->add_option("--n", n_pts, "sample count");
    chk->add_option("--sigma", sigma, "sub-Gaussian parameter");
    chk->add_option("--trials", trials, "Monte-Carlo trials");
    chk->add_option("--delta", delta, "failure probability");
    chk->add_option("--checkpoint", checkpoint, "checkpoint.csv (erm-bound, gap)");
    chk->add_option("--lambda", lambda, "weight decay coefficient (erm-bound)");
    chk->add_option("--barron", barron, "Barron norm of the target (erm-bound)");
    chk->add_option("--train", train_csv, "training dataset CSV (gap)");
    chk->add_option("--test", test_csv, "held-out dataset CSV (gap)");
    chk->add_option("--loss", loss, "loss kind (gap)");
    chk->add_option("--checks-csv", checks_csv, "append BoundReport rows here");

    auto* spl = app.add_subcommand("spline", "natural cubic spline through a 1D dataset");
    std::string table_csv;
    int samples = 201;
    spl->add_option("--data", data_csv, "dataset.csv")->required();
    spl->add_option("--samples", samples, "table sample count");
    spl->add_option("--table", table_csv, "write x,f(x) samples here");

    auto* rend = app.add_subcommand("render", "regenerate figure.svg for a run directory");
    std::string run_dir, out_svg;
    rend->add_option("--run-dir", run_dir, "finished run directory")->required();
    rend->add_option("--svg", out_svg, "output SVG path (default <run-dir>/figure.svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage problems are config errors
    }

    mn_status st = MN_OK;
    mn_summary* summary = nullptr;

    if (train->parsed() || sweep->parsed()) {
        mn_config* cfg = nullptr;
        st = load_config(common, &cfg);
        if (st != MN_OK) {
            mn_config_free(cfg);
            return fail(st);
        }
        st = train->parsed() ? mn_run_training(cfg, &summary) : mn_run_sweep(cfg, &summary);
        mn_config_free(cfg);
    } else if (a1d->parsed()) {
        st = mn_analyze_1d(checkpoint.c_str(), data_csv.c_str(), activation.c_str(), leaky_slope,
                           report_csv.empty() ? nullptr : report_csv.c_str(), &summary);
    } else if (arad->parsed()) {
        st = mn_analyze_radial(checkpoint.c_str(), activation.c_str(), leaky_slope,
                               radii.c_str(), n_dirs, common.seed,
                               reference.empty() ? nullptr : reference.c_str(),
                               rescale_grid.c_str(),
                               profile_csv.empty() ? nullptr : profile_csv.c_str(), &summary);
    } else if (chk->parsed()) {
        if (kind == "rademacher") {
            st = mn_check_rademacher(data_csv.c_str(), q, n_eps, candidates, refine, common.seed,
                                     checks_csv.c_str(), &summary);
        } else if (kind == "subgaussian") {
            st = mn_check_subgaussian(sg_kind.c_str(), dim, n_pts, sigma, trials, delta,
                                      common.seed, checks_csv.c_str(), &summary);
        } else if (kind == "erm-bound") {
            st = mn_check_erm_bound(checkpoint.c_str(), data_csv.c_str(), lambda, barron,
                                    checks_csv.c_str(), &summary);
        } else if (kind == "gap") {
            st = mn_check_generalization_gap(checkpoint.c_str(), train_csv.c_str(),
                                             test_csv.c_str(), loss.c_str(), checks_csv.c_str(),
                                             &summary);
        } else {
            std::fprintf(stderr, "error: unknown theory-check kind '%s'\n", kind.c_str());
            return 1;
        }
    } else if (spl->parsed()) {
        st = mn_spline(data_csv.c_str(), samples,
                       table_csv.empty() ? nullptr : table_csv.c_str(), &summary);
    } else if (rend->parsed()) {
        const std::string svg = out_svg.empty() ? run_dir + "/figure.svg" : out_svg;
        st = mn_render_run(run_dir.c_str(), svg.c_str());
        if (st == MN_OK) std::printf("wrote %s\n", svg.c_str());
        return st == MN_OK ? 0 : fail(st);
    }

    if (st != MN_OK) {
        const int code = fail(st);
        if (summary) {
            print_summary(summary);
            mn_summary_free(summary);
        }
        return code;
    }
    if (summary) {
        print_summary(summary);
        const int code = assert_summary(summary, common.do_assert);
        mn_summary_free(summary);
        return code;
    }
    return 0;
}
