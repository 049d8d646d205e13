// Acceptance suite: one pass/fail line per criterion. Criteria sharing
// trained networks (2+3, 5+6+7+12) reuse runs within one invocation.
//
// usage: minnorm_acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/analysis_1d.hpp"
#include "core/analysis_radial.hpp"
#include "core/common.hpp"
#include "core/config.hpp"
#include "core/datagen.hpp"
#include "core/initializers.hpp"
#include "core/nn_model.hpp"
#include "core/runner.hpp"
#include "core/theory_checks.hpp"

using namespace minnorm;
namespace fs = std::filesystem;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string g_work_tag = "all"; // one work tree per invocation, so parallel
                                // ctest groups never share run directories
fs::path work_root() {
    const fs::path p = fs::temp_directory_path() / "minnorm_acceptance" / g_work_tag;
    fs::create_directories(p);
    return p;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += ", ";
        detail += what + (ok ? "" : " <-- FAIL");
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

Check criterion_1() {
    Check c;
    const double t0 = now_seconds();
    RngStream s(2024, "acceptance.fd");
    const double h = 1e-5;
    double worst = 0.0;
    int done = 0;
    while (done < 100) {
        const int m = 1 + int(s.next_u64() % 8);
        const int d = 1 + int(s.next_u64() % 3);
        const int n = 1 + int(s.next_u64() % 6);
        NetParams p;
        p.a.resize(m);
        p.W.resize(m, d);
        p.b.resize(m);
        for (int i = 0; i < m; ++i) {
            p.a[i] = s.uniform(-1.5, 1.5);
            p.b[i] = s.uniform(-1.5, 1.5);
            for (int j = 0; j < d; ++j) p.W(i, j) = s.uniform(-1.5, 1.5);
        }
        p.b0 = s.uniform(-1, 1);
        Dataset ds;
        ds.X.resize(n, d);
        ds.y.resize(n);
        for (int i = 0; i < n; ++i) {
            ds.y[i] = s.uniform(-2, 2);
            for (int j = 0; j < d; ++j) ds.X(i, j) = s.uniform(-2, 2);
        }
        bool clear = true; // all preactivations at least 1e-3 from the kink
        for (int i = 0; i < n && clear; ++i) {
            const Eigen::VectorXd z = p.W * ds.X.row(i).transpose() + p.b;
            for (Eigen::Index k = 0; k < z.size(); ++k)
                if (std::abs(z[k]) < 1e-3) clear = false;
        }
        if (!clear) continue;
        ++done;

        const auto res = backward(p, Activation::relu(), LossKind::mse, 0.0, ds);
        auto risk_of = [&](const NetParams& q) {
            const Eigen::VectorXd f = forward_batch(q, Activation::relu(), ds.X);
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += (f[i] - ds.y[i]) * (f[i] - ds.y[i]);
            return acc / (2.0 * n);
        };
        auto probe = [&](double* slot, double grad) {
            const double save = *slot;
            *slot = save + h;
            const double up = risk_of(p);
            *slot = save - h;
            const double dn = risk_of(p);
            *slot = save;
            const double fd = (up - dn) / (2 * h);
            worst = std::max(worst, std::abs(grad - fd) / std::max(1.0, std::abs(fd)));
        };
        for (int i = 0; i < m; ++i) probe(&p.a[i], res.grads.da[i]);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < d; ++j) probe(&p.W(i, j), res.grads.dW(i, j));
        for (int i = 0; i < m; ++i) probe(&p.b[i], res.grads.db[i]);
        probe(&p.b0, res.grads.db0);
    }
    const double dt = now_seconds() - t0;
    c.require(worst < 1e-6, "max rel err " + fmt(worst) + " < 1e-6 over 100 configs");
    c.require(dt < 5.0, "runtime " + fmt(dt) + "s < 5s");
    return c;
}

// ---------------------------------------------------------- criteria 2 and 3

RunConfig config_1d_recovery(std::uint64_t seed, double lambda) {
    RunConfig cfg = RunConfig::from_string(
        "data.kind = abs1d\n"
        "data.k_per_side = 15\n"
        "data.lo = 1\n"
        "data.hi = 2\n"
        "model.m = 200\n"
        "init.scheme = xavier_uniform\n"
        "init.gain = 0.5\n"
        "optim.kind = adam\n"
        "optim.lr = 5e-5\n"
        "optim.steps = 50000\n");
    cfg.lambda = lambda;
    cfg.seed = seed;
    cfg.output_dir =
        (work_root() / ("c2-l" + format_double(lambda) + "-s" + std::to_string(seed))).string();
    return cfg;
}

const std::vector<RunSummary>& c2_runs() {
    static const std::vector<RunSummary> runs = [] {
        std::vector<RunSummary> rs;
        for (std::uint64_t seed = 0; seed < 5; ++seed)
            rs.push_back(run_training(config_1d_recovery(seed, 0.0)));
        return rs;
    }();
    return runs;
}

Check criterion_2() {
    Check c;
    const double t0 = now_seconds();
    std::vector<double> fit, cvx, ldev, rdev, tv;
    for (const RunSummary& r : c2_runs()) {
        fit.push_back(r.get("final_fit_risk"));
        cvx.push_back(r.get("convexity_defect"));
        ldev.push_back(r.get("left_slope_dev"));
        rdev.push_back(r.get("right_slope_dev"));
        tv.push_back(r.get("tv"));
    }
    const double dt = now_seconds() - t0;
    c.require(median(fit) < 1e-3, "median fit risk " + fmt(median(fit)) + " < 1e-3");
    c.require(median(cvx) < 0.1, "median convexity defect " + fmt(median(cvx)) + " < 0.1");
    c.require(median(ldev) < 0.1, "median |left slope + 1| " + fmt(median(ldev)) + " < 0.1");
    c.require(median(rdev) < 0.1, "median |right slope - 1| " + fmt(median(rdev)) + " < 0.1");
    c.require(median(tv) >= 2.0 - 1e-6 && median(tv) <= 2.5,
              "median tv " + fmt(median(tv)) + " in [2-1e-6, 2.5]");
    c.require(dt < 180.0, "runtime " + fmt(dt) + "s < 180s");
    return c;
}

Check criterion_3() {
    Check c;
    const Dataset ds = dataset_1d_abs(15, 1.0, 2.0);
    // lambda = 0: reuse the seed-0 run from criterion 2.
    const double risk0 = c2_runs()[0].get("final_risk");
    const double bound0 = direct_approx_bound(2.0, ds, 200, 0.0);
    c.require(risk0 < bound0, "lambda=0: risk " + fmt(risk0) + " < bound " + fmt(bound0));
    // lambda = 0.002: same recipe, one run.
    const RunSummary reg = run_training(config_1d_recovery(0, 0.002));
    const double bound2 = direct_approx_bound(2.0, ds, 200, 0.002);
    c.require(reg.get("final_risk") < bound2,
              "lambda=0.002: risk " + fmt(reg.get("final_risk")) + " < bound " + fmt(bound2));
    return c;
}

// ---------------------------------------------------------------- criterion 4

Check criterion_4() {
    Check c;
    const double t0 = now_seconds();
    RunConfig cfg = RunConfig::from_string(
        "data.kind = abs1d\n"
        "data.k_per_side = 15\n"
        "data.lo = 1\n"
        "data.hi = 5\n"
        "init.scheme = xavier_uniform\n"
        "init.gain = 0.5\n"
        "optim.kind = adam\n"
        "optim.lr = 1e-2\n"
        "optim.steps = 4000\n"
        "optim.schedule = 2000:0.1,3000:0.1\n"
        "sweep.triples = 100:0.1;400:0.05;1600:0.025\n"
        "sweep.seeds = 5\n"
        "seed = 0\n");
    cfg.output_dir = (work_root() / "c4-sweep").string();
    const RunSummary s = run_sweep(cfg);
    const double dt = now_seconds() - t0;
    const double d0 = s.get("triple0.median_abs_tv_minus_2");
    const double d1 = s.get("triple1.median_abs_tv_minus_2");
    const double d2 = s.get("triple2.median_abs_tv_minus_2");
    c.require(s.get("monotone") == 1.0, "median |tv-2| nonincreasing (" + fmt(d0) + " >= " +
                                            fmt(d1) + " >= " + fmt(d2) + ")");
    c.require(d2 < 0.15, "final median |tv-2| " + fmt(d2) + " < 0.15");
    c.require(dt < 600.0, "runtime " + fmt(dt) + "s < 600s");
    return c;
}

// ---------------------------------------------- criteria 5, 6, 7 and 12

RunConfig config_radial(int d, const std::string& optimizer, bool frozen, std::uint64_t seed) {
    RunConfig cfg = RunConfig::from_string(
        "data.kind = radial_bump\n"
        "data.n = 2000\n"
        "data.m1 = 0.2\n"
        "data.m2 = 0.2\n"
        "model.m = 2000\n"
        "init.scheme = xavier_normal\n"
        "init.gain = 1.4142135623730951\n"
        "optim.lr = 1e-3\n"
        "optim.mu = 0.99\n"
        "optim.batch_size = 50\n"
        "optim.steps = 20000\n"
        "analysis.radii = 0:7:141\n"
        "analysis.n_dirs = 500\n");
    cfg.data_d = d;
    cfg.optim.kind = optimizer_kind_from_string(optimizer);
    cfg.frozen_inner = frozen;
    cfg.seed = seed;
    cfg.reference_profile = "data/profiles/fd_star_d" + std::to_string(d) + ".csv";
    cfg.output_dir = (work_root() / ("radial-d" + std::to_string(d) + "-" + optimizer +
                                     (frozen ? "-frozen" : "") + "-s" + std::to_string(seed)))
                         .string();
    return cfg;
}

const std::vector<RunSummary>& radial_runs(int d, const std::string& optimizer, bool frozen) {
    static std::map<std::string, std::vector<RunSummary>> cache;
    const std::string key = std::to_string(d) + optimizer + (frozen ? "f" : "");
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<RunSummary> rs;
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
        rs.push_back(run_training(config_radial(d, optimizer, frozen, seed)));
    return cache.emplace(key, std::move(rs)).first->second;
}

Check criterion_5() {
    Check c;
    const double t0 = now_seconds();
    std::vector<double> at0, tail, maxstd, rfit;
    for (const RunSummary& r : radial_runs(15, "momentum", false)) {
        at0.push_back(r.get("profile_mean_r0"));
        maxstd.push_back(r.get("profile_max_std"));
        rfit.push_back(r.get("rescale_r"));
        // |mean| over r in [1.5, 5] from the stored profile
        const RadialProfile p = load_profile(fs::path(r.texts.at("run_dir")) / "profile.csv");
        double worst = 0.0;
        for (std::size_t k = 0; k < p.radii.size(); ++k)
            if (p.radii[k] >= 1.5 && p.radii[k] <= 5.0)
                worst = std::max(worst, std::abs(p.mean[k]));
        tail.push_back(worst);
    }
    const double dt = now_seconds() - t0;
    c.require(median(at0) >= 0.75 && median(at0) <= 1.1,
              "median mean at r=0 " + fmt(median(at0)) + " in [0.75, 1.1]");
    c.require(median(tail) < 0.15, "median max |mean| on [1.5,5] " + fmt(median(tail)) + " < 0.15");
    c.require(median(maxstd) <= 0.25, "median max std " + fmt(median(maxstd)) + " <= 0.25");
    c.require(median(rfit) >= 0.25 && median(rfit) <= 1.0 / 1.5,
              "median fitted r " + fmt(median(rfit)) + " in [1/4, 1/1.5]");
    c.require(dt < 900.0, "runtime " + fmt(dt) + "s < 900s");
    return c;
}

Check criterion_6() {
    Check c;
    std::vector<double> r3, r15;
    for (const RunSummary& r : radial_runs(3, "momentum", false)) r3.push_back(r.get("rescale_r"));
    for (const RunSummary& r : radial_runs(15, "momentum", false))
        r15.push_back(r.get("rescale_r"));
    c.require(median(r3) > median(r15), "median fitted r: d=3 " + fmt(median(r3)) + " > d=15 " +
                                            fmt(median(r15)));
    return c;
}

Check criterion_7() {
    Check c;
    std::vector<double> adam_std, mom_std;
    for (const RunSummary& r : radial_runs(15, "adam", false))
        adam_std.push_back(r.get("profile_mean_std"));
    for (const RunSummary& r : radial_runs(15, "momentum", false))
        mom_std.push_back(r.get("profile_mean_std"));
    c.require(median(adam_std) >= median(mom_std) - 0.02,
              "mean-over-radii std: adam " + fmt(median(adam_std)) + " >= momentum " +
                  fmt(median(mom_std)) + " - 0.02");
    return c;
}

// ---------------------------------------------------------------- criterion 8

Check criterion_8() {
    Check c;
    const double t0 = now_seconds();
    RngStream s(77, "acceptance.rademacher");
    bool all_below = true;
    double worst_slack = 1e300;
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + int(s.next_u64() % 19);
        const int d = 1 + int(s.next_u64() % 3);
        Dataset ds;
        ds.X.resize(n, d);
        ds.y = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) ds.X(i, j) = s.uniform(-3, 3);
        RademacherConfig cfg;
        cfg.Q = 0.5 + 1.5 * s.uniform01();
        cfg.n_eps = 10;
        cfg.n_candidates = 100;
        cfg.refine_steps = 10;
        const double est = rademacher_estimate(ds, cfg, s.substream(std::uint64_t(t)));
        const double bound = rademacher_bound(ds, cfg.Q);
        worst_slack = std::min(worst_slack, bound - est);
        if (est > bound) all_below = false;
    }
    c.require(all_below, "estimate <= bound on 50 random datasets (min slack " +
                             fmt(worst_slack) + ")");

    Dataset pm;
    pm.X.resize(2, 1);
    pm.X << 1.0, -1.0;
    pm.y = Eigen::VectorXd::Zero(2);
    RademacherConfig cfg;
    cfg.n_eps = 64;
    cfg.n_candidates = 200;
    cfg.refine_steps = 20;
    const double est = rademacher_estimate(pm, cfg, RngStream(78, "acceptance.pm"));
    c.require(est >= 0.45, "estimate on {+1,-1} " + fmt(est) + " >= 0.45");
    const double dt = now_seconds() - t0;
    c.require(dt < 120.0, "runtime " + fmt(dt) + "s < 120s");
    return c;
}

// ---------------------------------------------------------------- criterion 9

Check criterion_9() {
    Check c;
    const double t0 = now_seconds();
    int idx = 0;
    int satisfied = 0;
    for (SubgaussianKind kind : {SubgaussianKind::max_mean, SubgaussianKind::max_quantile,
                                 SubgaussianKind::mean_square}) {
        for (int d : {1, 5, 31}) {
            for (int n : {10, 100}) {
                const BoundReport rep = subgaussian_check(
                    kind, d, n, 1.0, 10000, 0.1, RngStream(90 + idx, "acceptance.sg"));
                ++idx;
                if (rep.satisfied) ++satisfied;
                else
                    c.require(false, "violated: kind " + std::to_string(int(kind)) + " d=" +
                                         std::to_string(d) + " n=" + std::to_string(n));
            }
        }
    }
    c.require(satisfied == 18, std::to_string(satisfied) + "/18 lemma checks at 3-sigma");
    const double dt = now_seconds() - t0;
    c.require(dt < 120.0, "runtime " + fmt(dt) + "s < 120s");
    return c;
}

// --------------------------------------------------------------- criterion 10

Check criterion_10() {
    Check c;
    const Dataset grid = dataset_1d_abs(15, 1.0, 2.0);
    const Spline s = natural_cubic_spline(grid);
    double knot_resid = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i)
        knot_resid = std::max(knot_resid, std::abs(s.eval(s.x[i]) - s.y[i]));
    c.require(knot_resid < 1e-12, "knot interpolation residual " + fmt(knot_resid) + " < 1e-12");
    const double bc = std::max(std::abs(s.m2.front()), std::abs(s.m2.back()));
    const double sys = spline_system_residual(s);
    c.require(bc == 0.0 && sys < 1e-12, "natural BC and system residual " + fmt(sys) + " < 1e-12");

    Dataset collinear;
    collinear.X.resize(5, 1);
    collinear.y.resize(5);
    for (int i = 0; i < 5; ++i) {
        collinear.X(i, 0) = 0.7 * i - 1.0;
        collinear.y[i] = 2.0 * collinear.X(i, 0) + 0.25;
    }
    const Spline line = natural_cubic_spline(collinear);
    double line_dev = 0.0;
    for (int t = 0; t <= 100; ++t) {
        const double x = -1.0 + 2.8 * t / 100.0;
        line_dev = std::max(line_dev, std::abs(line.eval(x) - (2.0 * x + 0.25)));
    }
    c.require(line_dev < 1e-12, "collinear data reproduces the line, dev " + fmt(line_dev));

    // Energy minimality over knot-slope perturbations (closed-form quadrature).
    std::vector<double> slopes(s.x.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) slopes[i] = s.derivative(s.x[i]);
    auto energy = [&](const std::vector<double>& sl) {
        double e = 0.0;
        for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
            const double h = s.x[i + 1] - s.x[i];
            const double dy = s.y[i + 1] - s.y[i];
            const double A = (6.0 * dy - h * (4.0 * sl[i] + 2.0 * sl[i + 1])) / (h * h);
            const double B = (-6.0 * dy + h * (2.0 * sl[i] + 4.0 * sl[i + 1])) / (h * h);
            e += h * (A * A + A * B + B * B) / 3.0;
        }
        return e;
    };
    const double base = energy(slopes);
    bool minimal = std::abs(base - spline_energy(s)) < 1e-9;
    for (std::size_t j = 0; j < slopes.size() && minimal; ++j)
        for (double delta : {1e-3, -1e-3}) {
            std::vector<double> pert = slopes;
            pert[j] += delta;
            if (energy(pert) <= base) minimal = false;
        }
    c.require(minimal, "curvature energy rises under every knot-slope perturbation");
    return c;
}

// --------------------------------------------------------------- criterion 11

Check criterion_11() {
    Check c;
    auto run_pair = [&](const std::string& text, const std::string& tag) {
        RunConfig cfg = RunConfig::from_string(text);
        cfg.single_thread = true;
        cfg.output_dir = (work_root() / (tag + "-a")).string();
        run_training(cfg);
        RunConfig twin = cfg;
        twin.output_dir = (work_root() / (tag + "-b")).string();
        run_training(twin);
        const bool metrics = slurp(fs::path(cfg.output_dir) / "metrics.csv") ==
                             slurp(fs::path(twin.output_dir) / "metrics.csv");
        const bool figure = slurp(fs::path(cfg.output_dir) / "figure.svg") ==
                            slurp(fs::path(twin.output_dir) / "figure.svg");
        c.require(metrics && figure, tag + ": metrics.csv and figure.svg byte-identical");
    };
    run_pair(
        "data.kind = abs1d\ndata.k_per_side = 15\nmodel.m = 50\ninit.gain = 0.5\n"
        "optim.kind = adam\noptim.lr = 1e-3\noptim.steps = 2000\nseed = 3\n",
        "det-1d");
    run_pair(
        "data.kind = radial_bump\ndata.n = 300\ndata.d = 3\nmodel.m = 100\n"
        "init.scheme = xavier_normal\ninit.gain = 1.4142135623730951\n"
        "optim.kind = momentum\noptim.lr = 1e-3\noptim.batch_size = 50\n"
        "optim.steps = 1000\nanalysis.radii = 0:7:71\nanalysis.n_dirs = 100\nseed = 4\n",
        "det-radial");
    return c;
}

// --------------------------------------------------------------- criterion 12

Check criterion_12() {
    Check c;
    auto slope_at_origin = [](const RunSummary& r) {
        const RadialProfile p = load_profile(fs::path(r.texts.at("run_dir")) / "profile.csv");
        return (p.mean[1] - p.mean[0]) / (p.radii[1] - p.radii[0]);
    };
    std::vector<double> frozen, free;
    for (const RunSummary& r : radial_runs(3, "momentum", true))
        frozen.push_back(std::abs(slope_at_origin(r)));
    for (const RunSummary& r : radial_runs(3, "momentum", false))
        free.push_back(std::abs(slope_at_origin(r)));
    c.require(median(frozen) <= 0.5 * median(free),
              "frozen |slope at 0| " + fmt(median(frozen)) + " <= half of unfrozen " +
                  fmt(median(free)));
    return c;
}

} // namespace

int main(int argc, char** argv) {
    const struct {
        int id;
        const char* name;
        Check (*fn)();
    } criteria[] = {
        {1, "gradient oracle vs central finite differences", criterion_1},
        {2, "1D minimum-norm recovery (small gain, Adam)", criterion_2},
        {3, "ERM risk bound from the direct approximation theorem", criterion_3},
        {4, "coupled lambda-m sweep drives tv to 2", criterion_4},
        {5, "radial shape in dimension 15 at desk scale", criterion_5},
        {6, "rescale factor decreases with dimension", criterion_6},
        {7, "Adam has at least momentum's radial deviation", criterion_7},
        {8, "Rademacher estimate stays below the bound", criterion_8},
        {9, "sub-Gaussian lemmas at Monte-Carlo tolerance", criterion_9},
        {10, "natural cubic spline exactness and minimality", criterion_10},
        {11, "bit-identical reruns in single-thread mode", criterion_11},
        {12, "random features are flat at the origin", criterion_12},
    };

    std::set<int> wanted;
    for (int a = 1; a < argc; ++a) wanted.insert(std::atoi(argv[a]));
    if (!wanted.empty()) {
        g_work_tag.clear();
        for (int id : wanted) g_work_tag += "c" + std::to_string(id);
    }
    bool all_pass = true;
    for (const auto& cr : criteria) {
        if (!wanted.empty() && !wanted.count(cr.id)) continue;
        const double t0 = now_seconds();
        Check result;
        try {
            result = cr.fn();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        const double dt = now_seconds() - t0;
        std::printf("criterion %2d: %s  %s (%s) [%.1fs]\n", cr.id,
                    result.pass ? "PASS" : "FAIL", cr.name, result.detail.c_str(), dt);
        std::fflush(stdout);
        all_pass = all_pass && result.pass;
    }
    return all_pass ? 0 : 1;
}
