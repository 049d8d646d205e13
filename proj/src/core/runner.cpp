#include "core/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "core/common.hpp"
#include "core/datagen.hpp"
#include "core/initializers.hpp"
#include "core/svg.hpp"
#include "core/theory_checks.hpp"

namespace minnorm {

namespace fs = std::filesystem;

double RunSummary::get(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw domain_error("summary has no entry '" + key + "'");
    return it->second;
}

Dataset build_dataset(const RunConfig& cfg) {
    Dataset ds;
    if (cfg.data_kind == "abs1d") {
        ds = dataset_1d_abs(cfg.k_per_side, cfg.data_lo, cfg.data_hi, cfg.inclusive_endpoints);
        ds.meta.seed = cfg.seed;
    } else if (cfg.data_kind == "radial_bump") {
        RadialMixtureConfig mix{cfg.data_d, cfg.m1, cfg.m2, cfg.r_lo, cfg.r_hi};
        ds = make_radial_bump_dataset(mix, cfg.data_n, cfg.seed);
    } else {
        ds = load_dataset(cfg.data_path);
    }
    ds.meta.config_hash = cfg.hash();
    return ds;
}

namespace {

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[std::size_t(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

struct MetricsRow {
    long epoch;
    double fit_risk, weight_decay, path_norm, lr;
};

struct TrainOutcome {
    NetParams net;          // depth == 1
    DeepNetParams deep;     // depth >= 2
    std::vector<MetricsRow> metrics;
    bool failed = false;
    std::string failure;
    long last_epoch = -1;
    long steps_done = 0;
};

double full_fit_risk(const NetParams& p, const Activation& act, LossKind loss,
                     const Dataset& ds) {
    const Eigen::VectorXd f = forward_batch(p, act, ds.X);
    double s = 0.0;
    for (Eigen::Index i = 0; i < ds.n(); ++i) s += loss_value(loss, f[i], ds.y[i]);
    return s / (2.0 * double(ds.n()));
}

// Flat packing for the L-BFGS driver and the deep-net path.
Eigen::VectorXd pack_net(const NetParams& p) {
    Eigen::VectorXd x(p.a.size() + p.W.size() + p.b.size() + 1);
    Eigen::Index off = 0;
    x.segment(off, p.a.size()) = p.a;
    off += p.a.size();
    x.segment(off, p.W.size()) = Eigen::Map<const Eigen::VectorXd>(p.W.data(), p.W.size());
    off += p.W.size();
    x.segment(off, p.b.size()) = p.b;
    off += p.b.size();
    x[off] = p.b0;
    return x;
}

void unpack_net(const Eigen::VectorXd& x, NetParams& p) {
    Eigen::Index off = 0;
    p.a = x.segment(off, p.a.size());
    off += p.a.size();
    Eigen::Map<const Eigen::VectorXd> wflat(x.data() + off, p.W.size());
    p.W = Eigen::Map<const Eigen::MatrixXd>(wflat.data(), p.W.rows(), p.W.cols());
    off += p.W.size();
    p.b = x.segment(off, p.b.size());
    off += p.b.size();
    p.b0 = x[off];
}

Eigen::VectorXd pack_deep(const DeepNetParams& p) {
    Eigen::Index total = 0;
    for (std::size_t l = 0; l < p.weights.size(); ++l)
        total += p.weights[l].size() + p.biases[l].size();
    Eigen::VectorXd x(total);
    Eigen::Index off = 0;
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        x.segment(off, p.weights[l].size()) =
            Eigen::Map<const Eigen::VectorXd>(p.weights[l].data(), p.weights[l].size());
        off += p.weights[l].size();
        x.segment(off, p.biases[l].size()) = p.biases[l];
        off += p.biases[l].size();
    }
    return x;
}

void unpack_deep(const Eigen::VectorXd& x, DeepNetParams& p) {
    Eigen::Index off = 0;
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        p.weights[l] = Eigen::Map<const Eigen::MatrixXd>(x.data() + off, p.weights[l].rows(),
                                                         p.weights[l].cols());
        off += p.weights[l].size();
        p.biases[l] = x.segment(off, p.biases[l].size());
        off += p.biases[l].size();
    }
}

Eigen::VectorXd pack_deep_grads(const DeepBackwardResult& g) {
    Eigen::Index total = 0;
    for (std::size_t l = 0; l < g.dweights.size(); ++l)
        total += g.dweights[l].size() + g.dbiases[l].size();
    Eigen::VectorXd x(total);
    Eigen::Index off = 0;
    for (std::size_t l = 0; l < g.dweights.size(); ++l) {
        x.segment(off, g.dweights[l].size()) =
            Eigen::Map<const Eigen::VectorXd>(g.dweights[l].data(), g.dweights[l].size());
        off += g.dweights[l].size();
        x.segment(off, g.dbiases[l].size()) = g.dbiases[l];
        off += g.dbiases[l].size();
    }
    return x;
}

double deep_full_fit(const DeepNetParams& p, const Activation& act, LossKind loss,
                     const Dataset& ds) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ds.n(); ++i)
        s += loss_value(loss, deep_forward(p, act, ds.X.row(i).transpose()), ds.y[i]);
    return s / (2.0 * double(ds.n()));
}

double deep_weight_decay(const DeepNetParams& p) {
    double wd = 0.0;
    for (const auto& w : p.weights) wd += 0.5 * w.squaredNorm();
    return wd;
}

TrainOutcome train_model(const RunConfig& cfg, const Dataset& ds) {
    TrainOutcome out;
    const int n = int(ds.n());
    const int B = cfg.optim.batch_size == 0 ? n : std::min(cfg.optim.batch_size, n);
    const long steps_per_epoch = (n + B - 1) / B;
    const long total_steps =
        cfg.steps > 0 ? cfg.steps : long(cfg.epochs) * steps_per_epoch;

    const bool deep = cfg.depth >= 2;
    if (deep) out.deep = init_deep_net(cfg.init, cfg.m, int(ds.dim()), cfg.depth, cfg.seed);
    else {
        out.net = init_net(cfg.init, cfg.m, int(ds.dim()), cfg.seed);
        out.net.frozen_inner = cfg.frozen_inner;
    }

    auto log_epoch = [&](long epoch, double lr_now) {
        MetricsRow row;
        row.epoch = epoch;
        row.lr = lr_now;
        if (deep) {
            row.fit_risk = deep_full_fit(out.deep, cfg.activation, cfg.loss, ds);
            row.weight_decay = deep_weight_decay(out.deep);
            row.path_norm = 0.0;
        } else {
            row.fit_risk = full_fit_risk(out.net, cfg.activation, cfg.loss, ds);
            row.weight_decay = weight_decay(out.net);
            row.path_norm = path_norm(out.net);
        }
        out.metrics.push_back(row);
        out.last_epoch = epoch;
    };

    try {
        if (cfg.optim.kind == OptimizerSpec::Kind::lbfgs) {
            // Deterministic full-batch quasi-Newton route.
            std::vector<int> all(static_cast<std::size_t>(n));
            std::iota(all.begin(), all.end(), 0);
            LbfgsOptions opts;
            opts.history = cfg.optim.history;
            opts.max_line_search = cfg.optim.max_line_search;
            opts.max_iterations = int(total_steps);
            if (deep) {
                DeepNetParams work = out.deep;
                Objective obj = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
                    unpack_deep(x, work);
                    auto res = deep_backward(work, cfg.activation, cfg.loss, cfg.lambda, ds.X,
                                             ds.y, all.data(), n);
                    grad = pack_deep_grads(res);
                    return res.risk;
                };
                opts.on_iteration = [&](int iter, const Eigen::VectorXd& x, double) {
                    unpack_deep(x, out.deep);
                    log_epoch(iter, cfg.optim.lr);
                };
                auto res = lbfgs_minimize(obj, pack_deep(out.deep), opts);
                unpack_deep(res.x, out.deep);
                out.steps_done = res.iterations;
            } else {
                NetParams work = out.net;
                Gradients g = Gradients::zero_like(work);
                Objective obj = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
                    unpack_net(x, work);
                    double risk, fit;
                    backward_into(work, cfg.activation, cfg.loss, cfg.lambda, ds.X, ds.y,
                                  all.data(), n, g, risk, fit);
                    NetParams gp;
                    gp.a = g.da;
                    gp.W = g.dW;
                    gp.b = g.db;
                    gp.b0 = g.db0;
                    grad = pack_net(gp);
                    return risk;
                };
                opts.on_iteration = [&](int iter, const Eigen::VectorXd& x, double) {
                    unpack_net(x, out.net);
                    log_epoch(iter, cfg.optim.lr);
                };
                auto res = lbfgs_minimize(obj, pack_net(out.net), opts);
                unpack_net(res.x, out.net);
                out.steps_done = res.iterations;
            }
            if (out.metrics.empty()) log_epoch(0, cfg.optim.lr);
            return out;
        }

        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        RngStream batch_stream(cfg.seed, "batch.order");
        Gradients grads;
        FlatOptimizerState flat_state;
        OptimizerState state;
        Eigen::VectorXd theta;
        if (deep) theta = pack_deep(out.deep);
        else grads = Gradients::zero_like(out.net);

        long epoch = -1;
        for (long step = 0; step < total_steps; ++step) {
            const long this_epoch = step / steps_per_epoch;
            if (this_epoch != epoch) {
                // One shuffle per epoch; full-batch runs keep natural order.
                if (B < n) batch_stream.shuffle(order);
                epoch = this_epoch;
            }
            const long chunk = step % steps_per_epoch;
            const int lo = int(chunk * B);
            const int count = std::min(B, n - lo);

            if (deep) {
                auto res = deep_backward(out.deep, cfg.activation, cfg.loss, cfg.lambda, ds.X,
                                         ds.y, order.data() + lo, count);
                Eigen::VectorXd g = pack_deep_grads(res);
                optimizer_step_flat(cfg.optim, flat_state, theta, g, int(epoch));
                unpack_deep(theta, out.deep);
            } else {
                double risk, fit;
                backward_into(out.net, cfg.activation, cfg.loss, cfg.lambda, ds.X, ds.y,
                              order.data() + lo, count, grads, risk, fit);
                optimizer_step(cfg.optim, state, out.net, grads, int(epoch));
            }
            out.steps_done = step + 1;
            const bool epoch_end = (step + 1) % steps_per_epoch == 0 || step + 1 == total_steps;
            if (epoch_end)
                log_epoch(epoch, cfg.optim.lr * schedule_factor(cfg.optim.schedule, int(epoch)));
        }
    } catch (const numeric_error& e) {
        out.failed = true;
        out.failure = e.what();
    }
    return out;
}

void write_metrics(const fs::path& path, const std::vector<MetricsRow>& rows) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    out << "epoch,fit_risk,weight_decay,path_norm,lr\n";
    for (const auto& r : rows)
        out << r.epoch << "," << format_double(r.fit_risk) << "," << format_double(r.weight_decay)
            << "," << format_double(r.path_norm) << "," << format_double(r.lr) << "\n";
    if (!out) throw io_error("failed writing " + path.string());
}

Dataset sorted_1d(const Dataset& ds) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(ds.n()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index l, Eigen::Index r) { return ds.X(l, 0) < ds.X(r, 0); });
    Dataset s;
    s.X.resize(ds.n(), 1);
    s.y.resize(ds.n());
    for (std::size_t i = 0; i < order.size(); ++i) {
        s.X(Eigen::Index(i), 0) = ds.X(order[i], 0);
        s.y[Eigen::Index(i)] = ds.y[order[i]];
    }
    s.meta = ds.meta;
    return s;
}

std::string figure_1d(const std::string& run_id, const PiecewiseLinear& pwl,
                      const Spline& spline, const Dataset& sorted) {
    const double x0 = sorted.X(0, 0), x1 = sorted.X(sorted.n() - 1, 0);
    const double pad = 0.25 * (x1 - x0);
    const int samples = 513;
    std::vector<double> xs(samples), learned(samples), target(samples), spl(samples);
    double ymin = 0.0, ymax = 0.0;
    const bool abs_target = sorted.meta.generator == "abs1d";
    for (int i = 0; i < samples; ++i) {
        const double x = x0 - pad + (x1 - x0 + 2 * pad) * double(i) / (samples - 1);
        xs[std::size_t(i)] = x;
        learned[std::size_t(i)] = pwl.eval(x);
        spl[std::size_t(i)] = spline.eval(x);
        if (abs_target) {
            target[std::size_t(i)] = std::abs(x);
        } else {
            // Piecewise-linear interpolation through the data as the target.
            Eigen::Index j = 0;
            while (j + 2 < sorted.n() && sorted.X(j + 1, 0) < x) ++j;
            const double t =
                (x - sorted.X(j, 0)) / (sorted.X(j + 1, 0) - sorted.X(j, 0));
            target[std::size_t(i)] = sorted.y[j] + t * (sorted.y[j + 1] - sorted.y[j]);
        }
        ymin = std::min({ymin, learned[std::size_t(i)], target[std::size_t(i)], spl[std::size_t(i)]});
        ymax = std::max({ymax, learned[std::size_t(i)], target[std::size_t(i)], spl[std::size_t(i)]});
    }
    SvgFigure fig(x0 - pad, x1 + pad, ymin - 0.1, ymax + 0.1, "x", "f(x)");
    for (Eigen::Index i = 0; i < sorted.n(); ++i)
        fig.add_vertical_marker(sorted.X(i, 0), "data-marker", "#cccccc");
    fig.add_polyline(xs, learned, "learned", "#d62728");
    fig.add_polyline(xs, target, "target", "#1f77b4");
    fig.add_polyline(xs, spl, "spline", "#2ca02c");
    fig.add_legend_entry("learned " + run_id, "#d62728");
    fig.add_legend_entry("target", "#1f77b4");
    fig.add_legend_entry("natural cubic spline", "#2ca02c");
    return fig.render();
}

std::string figure_radial(const std::string& run_id, const RadialProfile& prof,
                          const RadialProfile* reference, const RescaleFit* fit) {
    std::vector<double> lo(prof.radii.size()), hi(prof.radii.size()), ref;
    double ymin = 0.0, ymax = 1.0;
    for (std::size_t k = 0; k < prof.radii.size(); ++k) {
        lo[k] = prof.mean[k] - prof.std_dev[k];
        hi[k] = prof.mean[k] + prof.std_dev[k];
        ymin = std::min(ymin, lo[k]);
        ymax = std::max(ymax, hi[k]);
    }
    if (reference && fit) {
        ref.resize(prof.radii.size());
        for (std::size_t k = 0; k < prof.radii.size(); ++k) {
            ref[k] = eval_profile(*reference, fit->r * prof.radii[k]);
            ymin = std::min(ymin, ref[k]);
            ymax = std::max(ymax, ref[k]);
        }
    }
    SvgFigure fig(prof.radii.front(), prof.radii.back(), ymin - 0.05, ymax + 0.05, "radius",
                  "radial average");
    fig.add_band(prof.radii, lo, hi, "band", "#d62728");
    fig.add_polyline(prof.radii, prof.mean, "learned", "#d62728");
    fig.add_legend_entry("radial mean " + run_id + " (±1 std shaded)", "#d62728");
    if (reference && fit) {
        fig.add_polyline(prof.radii, ref, "reference", "#1f77b4");
        fig.add_legend_entry("reference rescaled by r=" + format_fixed(fit->r, 4), "#1f77b4");
    }
    return fig.render();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path.string());
    out << text;
    if (!out) throw io_error("failed writing " + path.string());
}

void write_manifest(const fs::path& path, const RunConfig& cfg, const TrainOutcome& outcome) {
    std::vector<std::string> lines = {
        "build=minnorm-0.1.0",
        "config_hash=" + hash_hex(cfg.hash()),
        "data_kind=" + cfg.data_kind,
        "last_epoch=" + std::to_string(outcome.last_epoch),
        "seed=" + std::to_string(cfg.seed),
        "single_thread=" + std::string(cfg.single_thread ? "true" : "false"),
        "status=" + std::string(outcome.failed ? "failed" : "ok"),
        "steps=" + std::to_string(outcome.steps_done),
    };
    if (outcome.failed) lines.push_back("failure=" + outcome.failure);
    std::sort(lines.begin(), lines.end());
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    write_text(path, text);
}

std::map<std::string, std::string> read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

} // namespace

RunSummary run_training(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.output_dir.empty()) throw config_error("output_dir is required");

    const Dataset ds = build_dataset(cfg);
    if (cfg.depth >= 2 && ds.dim() < 2)
        throw config_error("deep runs expect multi-dimensional (radial) data");

    TrainOutcome outcome = train_model(cfg, ds);
    const std::string run_id = hash_hex(cfg.hash()).substr(0, 8) + "-s" + std::to_string(cfg.seed);

    const fs::path out_dir(cfg.output_dir);
    const fs::path tmp_dir(cfg.output_dir + ".tmp");
    fs::remove_all(tmp_dir);
    if (out_dir.has_parent_path()) fs::create_directories(out_dir.parent_path());
    fs::create_directories(tmp_dir);

    write_text(tmp_dir / "config.cfg", cfg.canonical_string());
    save_dataset(tmp_dir / "dataset.csv", ds);
    write_metrics(tmp_dir / "metrics.csv", outcome.metrics);

    RunSummary summary;
    summary.failed = outcome.failed;
    summary.values["failed"] = outcome.failed ? 1.0 : 0.0;
    summary.values["steps"] = double(outcome.steps_done);
    summary.values["epochs"] = double(outcome.metrics.size());
    if (!outcome.metrics.empty()) {
        const auto& last = outcome.metrics.back();
        summary.values["final_fit_risk"] = last.fit_risk;
        summary.values["final_mean_loss"] = 2.0 * last.fit_risk; // (1/n)-normalized
        summary.values["final_weight_decay"] = last.weight_decay;
        summary.values["final_path_norm"] = last.path_norm;
        summary.values["final_risk"] = last.fit_risk + cfg.lambda * last.weight_decay;
    }

    if (cfg.depth == 1) save_checkpoint(tmp_dir / "checkpoint.csv", outcome.net);

    if (!outcome.failed) {
        if (ds.dim() == 1 && cfg.depth == 1) {
            const Dataset sorted = sorted_1d(ds);
            const PiecewiseLinear pwl = extract_pwl(outcome.net, cfg.activation);
            const MinNormReport rep = minnorm_distance(pwl, sorted);
            const TvResult tv = tv_of_slope(pwl);
            const Spline spline = natural_cubic_spline(sorted);

            std::string report = "run_id,misfit,convexity_defect,left_dev,right_dev,tv\n";
            report += run_id + "," + format_double(rep.data_misfit) + "," +
                      format_double(rep.convexity_defect) + "," +
                      format_double(rep.left_slope_dev) + "," +
                      format_double(rep.right_slope_dev) + "," +
                      format_double(rep.barron_seminorm) + "\n";
            write_text(tmp_dir / "report.csv", report);
            write_text(tmp_dir / "figure.svg", figure_1d(run_id, pwl, spline, sorted));

            summary.values["misfit"] = rep.data_misfit;
            summary.values["convexity_defect"] = rep.convexity_defect;
            summary.values["left_slope_dev"] = rep.left_slope_dev;
            summary.values["right_slope_dev"] = rep.right_slope_dev;
            summary.values["tv"] = rep.barron_seminorm;
            summary.values["tv_hypothesis"] = tv.seminorm_hypothesis ? 1.0 : 0.0;
            long kinks = 0;
            for (std::size_t k = 0; k + 1 < pwl.slopes.size(); ++k)
                if (std::abs(pwl.slopes[k + 1] - pwl.slopes[k]) > 1e-3) ++kinks;
            summary.values["kink_count"] = double(kinks);
        } else {
            PointEvaluator eval;
            if (cfg.depth >= 2) {
                eval = [&](const Eigen::VectorXd& x) {
                    return deep_forward(outcome.deep, cfg.activation, x);
                };
            } else {
                eval = [&](const Eigen::VectorXd& x) {
                    return forward(outcome.net, cfg.activation, x);
                };
            }
            const RadialProfile prof =
                radial_stats(eval, int(ds.dim()), cfg.radii.linear_values(), cfg.n_dirs,
                             RngStream(cfg.seed, "radial.dirs"));
            save_profile(tmp_dir / "profile.csv", prof);

            RadialProfile reference;
            RescaleFit fit;
            bool have_fit = false;
            if (!cfg.reference_profile.empty()) {
                reference = load_profile(cfg.reference_profile);
                RescaleGrid grid{cfg.rescale_grid.lo, cfg.rescale_grid.hi, cfg.rescale_grid.count};
                fit = fit_rescale(prof, reference, grid);
                have_fit = true;
                save_profile(tmp_dir / "reference.csv", reference);
                write_text(tmp_dir / "fit.csv",
                           "r,l2_discrepancy\n" + format_double(fit.r) + "," +
                               format_double(fit.l2_discrepancy) + "\n");
                summary.values["rescale_r"] = fit.r;
                summary.values["rescale_discrepancy"] = fit.l2_discrepancy;
            }
            write_text(tmp_dir / "figure.svg",
                       figure_radial(run_id, prof, have_fit ? &reference : nullptr,
                                     have_fit ? &fit : nullptr));

            summary.values["profile_mean_r0"] = prof.mean.front();
            summary.values["profile_max_std"] =
                *std::max_element(prof.std_dev.begin(), prof.std_dev.end());
            double max_abs_tail = 0.0;
            for (std::size_t k = 0; k < prof.radii.size(); ++k)
                if (prof.radii[k] >= 1.5)
                    max_abs_tail = std::max(max_abs_tail, std::abs(prof.mean[k]));
            summary.values["profile_max_abs_mean_tail"] = max_abs_tail;
            double mean_std = 0.0;
            for (double sdv : prof.std_dev) mean_std += sdv;
            summary.values["profile_mean_std"] = mean_std / double(prof.std_dev.size());
        }
    }

    write_manifest(tmp_dir / "manifest.txt", cfg, outcome);
    fs::remove_all(out_dir);
    fs::rename(tmp_dir, out_dir);
    summary.texts["run_dir"] = out_dir.string();
    return summary;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

} // namespace

RunSummary run_sweep(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.sweep_triples.empty()) throw config_error("sweep.triples is required for sweeps");
    if (cfg.output_dir.empty()) throw config_error("output_dir is required");

    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);

    RunSummary summary;
    std::string report =
        "triple,m,lambda,n,runs_ok,median_misfit,median_convexity_defect,median_left_dev,"
        "median_right_dev,median_tv,median_abs_tv_minus_2\n";
    std::vector<double> devs;
    for (std::size_t t = 0; t < cfg.sweep_triples.size(); ++t) {
        const auto& triple = cfg.sweep_triples[t];
        std::vector<double> misfit, cvx, ldev, rdev, tvs, atv;
        int ok = 0;
        for (int j = 0; j < cfg.sweep_seeds; ++j) {
            RunConfig sub = cfg;
            sub.sweep_triples.clear();
            sub.m = triple.m;
            sub.lambda = triple.lambda;
            if (triple.n > 0) sub.data_n = triple.n;
            sub.seed = cfg.seed + std::uint64_t(j);
            sub.output_dir =
                (out_dir / ("triple-" + std::to_string(t) + "-seed-" + std::to_string(j)))
                    .string();
            try {
                RunSummary rs = run_training(sub);
                if (rs.failed || !rs.has("tv")) continue;
                ++ok;
                misfit.push_back(rs.get("misfit"));
                cvx.push_back(rs.get("convexity_defect"));
                ldev.push_back(rs.get("left_slope_dev"));
                rdev.push_back(rs.get("right_slope_dev"));
                tvs.push_back(rs.get("tv"));
                atv.push_back(std::abs(rs.get("tv") - 2.0));
            } catch (const numeric_error&) {
                // recorded via runs_ok, sweep continues
            }
        }
        const double dev = median(atv);
        devs.push_back(dev);
        report += std::to_string(t) + "," + std::to_string(triple.m) + "," +
                  format_double(triple.lambda) + "," + std::to_string(triple.n) + "," +
                  std::to_string(ok) + "," + format_double(median(misfit)) + "," +
                  format_double(median(cvx)) + "," + format_double(median(ldev)) + "," +
                  format_double(median(rdev)) + "," + format_double(median(tvs)) + "," +
                  format_double(dev) + "\n";
        const std::string prefix = "triple" + std::to_string(t) + ".";
        summary.values[prefix + "median_tv"] = median(tvs);
        summary.values[prefix + "median_abs_tv_minus_2"] = dev;
        summary.values[prefix + "runs_ok"] = ok;
    }
    bool monotone = true;
    for (std::size_t t = 0; t + 1 < devs.size(); ++t)
        if (!(devs[t + 1] <= devs[t]) || std::isnan(devs[t])) monotone = false;
    if (!devs.empty() && std::isnan(devs.back())) monotone = false;
    summary.values["monotone"] = monotone ? 1.0 : 0.0;
    summary.values["triples"] = double(devs.size());
    if (!devs.empty()) summary.values["final_median_abs_tv_minus_2"] = devs.back();
    write_text(out_dir / "sweep_report.csv", report);
    summary.texts["run_dir"] = out_dir.string();
    return summary;
}

void render_run(const fs::path& run_dir, const fs::path& out_svg) {
    const auto manifest = read_manifest(run_dir / "manifest.txt");
    const auto it = manifest.find("data_kind");
    if (it == manifest.end()) throw io_error("manifest missing data_kind in " + run_dir.string());
    const RunConfig cfg = RunConfig::from_file(run_dir / "config.cfg");
    const std::string run_id =
        hash_hex(cfg.hash()).substr(0, 8) + "-s" + std::to_string(cfg.seed);

    Dataset ds = load_dataset(run_dir / "dataset.csv");
    ds.meta.generator = cfg.data_kind == "abs1d" ? "abs1d" : ds.meta.generator;
    if (ds.dim() == 1 && cfg.depth == 1) {
        const NetParams net = load_checkpoint(run_dir / "checkpoint.csv");
        const Dataset sorted = sorted_1d(ds);
        const PiecewiseLinear pwl = extract_pwl(net, cfg.activation);
        const Spline spline = natural_cubic_spline(sorted);
        write_text(out_svg, figure_1d(run_id, pwl, spline, sorted));
    } else {
        const RadialProfile prof = load_profile(run_dir / "profile.csv");
        RadialProfile reference;
        RescaleFit fit;
        bool have_fit = false;
        if (fs::exists(run_dir / "fit.csv") && fs::exists(run_dir / "reference.csv")) {
            reference = load_profile(run_dir / "reference.csv");
            std::ifstream in(run_dir / "fit.csv");
            std::string header, row;
            if (std::getline(in, header) && std::getline(in, row)) {
                const auto comma = row.find(',');
                fit.r = parse_double(std::string_view(row).substr(0, comma));
                fit.l2_discrepancy = parse_double(std::string_view(row).substr(comma + 1));
                have_fit = true;
            }
        }
        write_text(out_svg, figure_radial(run_id, prof, have_fit ? &reference : nullptr,
                                          have_fit ? &fit : nullptr));
    }
}

} // namespace minnorm
