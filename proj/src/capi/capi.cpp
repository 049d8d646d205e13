#include "minnorm.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "core/analysis_1d.hpp"
#include "core/analysis_radial.hpp"
#include "core/common.hpp"
#include "core/config.hpp"
#include "core/datagen.hpp"
#include "core/nn_model.hpp"
#include "core/runner.hpp"
#include "core/theory_checks.hpp"

using namespace minnorm;

struct mn_config {
    RunConfig cfg;
};

struct mn_summary {
    std::vector<std::pair<std::string, double>> values;
    std::map<std::string, std::string> texts;
};

struct mn_net {
    NetParams params;
    Activation act = Activation::relu();
};

namespace {

thread_local std::string g_last_error;

mn_status fail(mn_status code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename Fn>
mn_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return MN_OK;
    } catch (const config_error& e) {
        return fail(MN_ERR_CONFIG, e.what());
    } catch (const numeric_error& e) {
        return fail(MN_ERR_NUMERIC, e.what());
    } catch (const parse_error& e) {
        return fail(MN_ERR_IO, e.what());
    } catch (const io_error& e) {
        return fail(MN_ERR_IO, e.what());
    } catch (const shape_error& e) {
        return fail(MN_ERR_CONFIG, e.what());
    } catch (const domain_error& e) {
        return fail(MN_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(MN_ERR_INVALID, e.what());
    }
}

mn_summary* make_summary(const RunSummary& rs) {
    auto* s = new mn_summary;
    for (const auto& [k, v] : rs.values) s->values.emplace_back(k, v);
    s->texts = rs.texts;
    return s;
}

void append_check_row(const char* checks_csv, const std::string& kind, const std::string& detail,
                      double quantity, double bound, double slack, int satisfied) {
    if (!checks_csv || !*checks_csv) return;
    const std::filesystem::path path(checks_csv);
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream out(path, std::ios::app);
    if (!out) throw io_error("cannot write " + path.string());
    if (fresh) out << "kind,detail,quantity,bound,slack,satisfied\n";
    out << kind << "," << detail << "," << format_double(quantity) << "," << format_double(bound)
        << "," << format_double(slack) << "," << satisfied << "\n";
}

Activation parse_activation(const char* activation, double leaky_slope) {
    if (!activation) throw config_error("activation must be relu or leaky_relu");
    const std::string a = activation;
    if (a == "relu") return Activation::relu();
    if (a == "leaky_relu") return Activation::leaky(leaky_slope);
    throw config_error("activation must be relu or leaky_relu, got '" + a + "'");
}

} // namespace

extern "C" {

const char* mn_version(void) { return "0.1.0"; }

const char* mn_last_error(void) { return g_last_error.c_str(); }

mn_status mn_config_create(mn_config** out) {
    if (!out) return fail(MN_ERR_INVALID, "null output pointer");
    *out = new mn_config;
    g_last_error.clear();
    return MN_OK;
}

mn_status mn_config_load(const char* path, mn_config** out) {
    if (!out || !path) return fail(MN_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* c = new mn_config;
        try {
            c->cfg = RunConfig::from_file(path);
        } catch (...) {
            delete c;
            throw;
        }
        *out = c;
    });
}

mn_status mn_config_set(mn_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return fail(MN_ERR_INVALID, "null argument");
    return guarded([&] { cfg->cfg.set(key, value); });
}

void mn_config_free(mn_config* cfg) { delete cfg; }

size_t mn_summary_size(const mn_summary* s) { return s ? s->values.size() : 0; }

const char* mn_summary_key(const mn_summary* s, size_t i) {
    return s && i < s->values.size() ? s->values[i].first.c_str() : nullptr;
}

double mn_summary_value(const mn_summary* s, size_t i) {
    return s && i < s->values.size() ? s->values[i].second : 0.0;
}

mn_status mn_summary_get(const mn_summary* s, const char* key, double* out) {
    if (!s || !key || !out) return fail(MN_ERR_INVALID, "null argument");
    for (const auto& [k, v] : s->values)
        if (k == key) {
            *out = v;
            g_last_error.clear();
            return MN_OK;
        }
    return fail(MN_ERR_INVALID, "summary has no such key");
}

const char* mn_summary_text(const mn_summary* s, const char* key) {
    if (!s || !key) return nullptr;
    const auto it = s->texts.find(key);
    return it == s->texts.end() ? nullptr : it->second.c_str();
}

void mn_summary_free(mn_summary* s) { delete s; }

mn_status mn_run_training(const mn_config* cfg, mn_summary** out) {
    if (!cfg || !out) return fail(MN_ERR_INVALID, "null argument");
    *out = nullptr;
    mn_status extra = MN_OK;
    const mn_status st = guarded([&] {
        const RunSummary rs = run_training(cfg->cfg);
        *out = make_summary(rs);
        if (rs.failed) extra = MN_ERR_NUMERIC;
    });
    if (st != MN_OK) return st;
    if (extra != MN_OK) return fail(extra, "training diverged; run directory has status=failed");
    return MN_OK;
}

mn_status mn_run_sweep(const mn_config* cfg, mn_summary** out) {
    if (!cfg || !out) return fail(MN_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] { *out = make_summary(run_sweep(cfg->cfg)); });
}

mn_status mn_render_run(const char* run_dir, const char* out_svg) {
    if (!run_dir || !out_svg) return fail(MN_ERR_INVALID, "null argument");
    return guarded([&] { render_run(run_dir, out_svg); });
}

mn_status mn_analyze_1d(const char* checkpoint_csv, const char* data_csv, const char* activation,
                        double leaky_slope, const char* report_csv_or_null, mn_summary** out) {
    if (!checkpoint_csv || !data_csv || !out) return fail(MN_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        const Activation act = parse_activation(activation, leaky_slope);
        const NetParams net = load_checkpoint(checkpoint_csv);
        Dataset ds = load_dataset(data_csv);
        // minnorm_distance expects ascending x.
        std::vector<Eigen::Index> order(static_cast<std::size_t>(ds.n()));
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = Eigen::Index(i);
        std::sort(order.begin(), order.end(),
                  [&](Eigen::Index l, Eigen::Index r) { return ds.X(l, 0) < ds.X(r, 0); });
        Dataset sorted;
        sorted.X.resize(ds.n(), 1);
        sorted.y.resize(ds.n());
        for (std::size_t i = 0; i < order.size(); ++i) {
            sorted.X(Eigen::Index(i), 0) = ds.X(order[i], 0);
            sorted.y[Eigen::Index(i)] = ds.y[order[i]];
        }

        const PiecewiseLinear pwl = extract_pwl(net, act);
        const MinNormReport rep = minnorm_distance(pwl, sorted);
        const TvResult tv = tv_of_slope(pwl);

        if (report_csv_or_null && *report_csv_or_null) {
            const std::filesystem::path path(report_csv_or_null);
            const bool fresh = !std::filesystem::exists(path);
            std::ofstream f(path, std::ios::app);
            if (!f) throw io_error("cannot write " + path.string());
            if (fresh) f << "run_id,misfit,convexity_defect,left_dev,right_dev,tv\n";
            f << "analyze," << format_double(rep.data_misfit) << ","
              << format_double(rep.convexity_defect) << "," << format_double(rep.left_slope_dev)
              << "," << format_double(rep.right_slope_dev) << ","
              << format_double(rep.barron_seminorm) << "\n";
        }

        RunSummary rs;
        rs.values["misfit"] = rep.data_misfit;
        rs.values["convexity_defect"] = rep.convexity_defect;
        rs.values["left_slope_dev"] = rep.left_slope_dev;
        rs.values["right_slope_dev"] = rep.right_slope_dev;
        rs.values["tv"] = rep.barron_seminorm;
        rs.values["tv_hypothesis"] = tv.seminorm_hypothesis ? 1.0 : 0.0;
        rs.values["path_norm"] = path_norm(net);
        rs.values["weight_decay"] = weight_decay(net);
        *out = make_summary(rs);
    });
}

mn_status mn_analyze_radial(const char* checkpoint_csv, const char* activation,
                            double leaky_slope, const char* radii, int n_dirs, uint64_t seed,
                            const char* reference_csv_or_null, const char* rescale_grid,
                            const char* profile_csv_or_null, mn_summary** out) {
    if (!checkpoint_csv || !radii || !out) return fail(MN_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        const Activation act = parse_activation(activation, leaky_slope);
        const NetParams net = load_checkpoint(checkpoint_csv);
        const GridSpec grid = parse_grid(radii);
        const RadialProfile prof = radial_stats(
            [&](const Eigen::VectorXd& x) { return forward(net, act, x); },
            int(net.input_dim()), grid.linear_values(), n_dirs, RngStream(seed, "radial.dirs"));
        if (profile_csv_or_null && *profile_csv_or_null)
            save_profile(profile_csv_or_null, prof);

        RunSummary rs;
        rs.values["profile_mean_r0"] = prof.mean.front();
        double mx = 0.0;
        for (double s : prof.std_dev) mx = std::max(mx, s);
        rs.values["profile_max_std"] = mx;
        if (reference_csv_or_null && *reference_csv_or_null) {
            const RadialProfile ref = load_profile(reference_csv_or_null);
            const GridSpec rg = parse_grid(rescale_grid ? rescale_grid : "0.125:2:200");
            const RescaleFit fit = fit_rescale(prof, ref, RescaleGrid{rg.lo, rg.hi, rg.count});
            rs.values["rescale_r"] = fit.r;
            rs.values["rescale_discrepancy"] = fit.l2_discrepancy;
        }
        *out = make_summary(rs);
    });
}

mn_status mn_spline(const char* data_csv, int samples, const char* table_csv_or_null,
                    mn_summary** out) {
    if (!data_csv || !out) return fail(MN_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        const Dataset ds = load_dataset(data_csv);
        const Spline s = natural_cubic_spline(ds);
        if (table_csv_or_null && *table_csv_or_null) {
            if (samples < 2) throw config_error("spline table needs at least 2 samples");
            std::ofstream f(table_csv_or_null);
            if (!f) throw io_error(std::string("cannot write ") + table_csv_or_null);
            f << "x,f\n";
            const double lo = s.x.front(), hi = s.x.back();
            for (int i = 0; i < samples; ++i) {
                const double t = lo + (hi - lo) * double(i) / (samples - 1);
                f << format_double(t) << "," << format_double(s.eval(t)) << "\n";
            }
        }
        RunSummary rs;
        rs.values["knots"] = double(s.x.size());
        rs.values["energy"] = spline_energy(s);
        rs.values["left_slope"] = s.derivative(s.x.front());
        rs.values["right_slope"] = s.derivative(s.x.back());
        rs.values["system_residual"] = spline_system_residual(s);
        *out = make_summary(rs);
    });
}

mn_status mn_check_rademacher(const char* data_csv, double q, int n_eps, int n_candidates,
                              int refine_steps, uint64_t seed, const char* checks_csv,
                              mn_summary** out) {
    if (!data_csv || !out) return fail(MN_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        const Dataset ds = load_dataset(data_csv);
        RademacherConfig cfg;
        cfg.Q = q;
        cfg.n_eps = n_eps;
        cfg.n_candidates = n_candidates;
        cfg.refine_steps = refine_steps;
        const double est = rademacher_estimate(ds, cfg, RngStream(seed, "rademacher"));
        const double bound = rademacher_bound(ds, q);
        append_check_row(checks_csv, "rademacher", "q=" + format_double(q), est, bound,
                         bound - est, bound - est >= 0.0 ? 1 : 0);
        RunSummary rs;
        rs.values["estimate"] = est;
        rs.values["bound"] = bound;
        rs.values["slack"] = bound - est;
        rs.values["satisfied"] = bound - est >= 0.0 ? 1.0 : 0.0;
        *out = make_summary(rs);
    });
}

mn_status mn_check_subgaussian(const char* kind, int d, int n, double sigma, int trials,
                               double delta, uint64_t seed, const char* checks_csv,
                               mn_summary** out) {
    if (!kind || !out) return fail(MN_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        const SubgaussianKind k = subgaussian_kind_from_string(kind);
        const BoundReport rep =
            subgaussian_check(k, d, n, sigma, trials, delta, RngStream(seed, "subgaussian"));
        append_check_row(checks_csv, "subgaussian",
                         std::string(kind) + " d=" + std::to_string(d) + " n=" + std::to_string(n),
                         rep.quantity, rep.bound, rep.slack, rep.satisfied ? 1 : 0);
        RunSummary rs;
        rs.values["quantity"] = rep.quantity;
        rs.values["bound"] = rep.bound;
        rs.values["slack"] = rep.slack;
        rs.values["satisfied"] = rep.satisfied ? 1.0 : 0.0;
        *out = make_summary(rs);
    });
}

mn_status mn_check_erm_bound(const char* checkpoint_csv, const char* data_csv, double lambda,
                             double barron_norm, const char* checks_csv, mn_summary** out) {
    if (!checkpoint_csv || !data_csv || !out) return fail(MN_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        const NetParams net = load_checkpoint(checkpoint_csv);
        const Dataset ds = load_dataset(data_csv);
        const BoundReport rep =
            erm_bound_check(net, Activation::relu(), ds, lambda, barron_norm);
        append_check_row(checks_csv, "erm-bound", "lambda=" + format_double(lambda),
                         rep.quantity, rep.bound, rep.slack, rep.satisfied ? 1 : 0);
        RunSummary rs;
        rs.values["risk"] = rep.quantity;
        rs.values["bound"] = rep.bound;
        rs.values["slack"] = rep.slack;
        rs.values["satisfied"] = rep.satisfied ? 1.0 : 0.0;
        *out = make_summary(rs);
    });
}

mn_status mn_check_generalization_gap(const char* checkpoint_csv, const char* train_csv,
                                      const char* test_csv, const char* loss,
                                      const char* checks_csv, mn_summary** out) {
    if (!checkpoint_csv || !train_csv || !test_csv || !out)
        return fail(MN_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        const NetParams net = load_checkpoint(checkpoint_csv);
        const Dataset train = load_dataset(train_csv);
        const Dataset test = load_dataset(test_csv);
        const LossKind lk = loss && *loss ? loss_from_string(loss) : LossKind::mse;
        const double gap = generalization_gap(net, Activation::relu(), train, test, lk);
        append_check_row(checks_csv, "gap", loss_to_string(lk), gap, std::nan(""), std::nan(""),
                         1);
        RunSummary rs;
        rs.values["gap"] = gap;
        *out = make_summary(rs);
    });
}

mn_status mn_net_load(const char* checkpoint_csv, mn_net** out) {
    if (!checkpoint_csv || !out) return fail(MN_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* n = new mn_net;
        try {
            n->params = load_checkpoint(checkpoint_csv);
        } catch (...) {
            delete n;
            throw;
        }
        *out = n;
    });
}

mn_status mn_net_set_activation(mn_net* net, const char* activation, double leaky_slope) {
    if (!net) return fail(MN_ERR_INVALID, "null handle");
    return guarded([&] { net->act = parse_activation(activation, leaky_slope); });
}

mn_status mn_net_forward(const mn_net* net, const double* x, int d, double* out) {
    if (!net || !x || !out) return fail(MN_ERR_INVALID, "null argument");
    return guarded([&] {
        Eigen::Map<const Eigen::VectorXd> xv(x, d);
        *out = forward(net->params, net->act, xv);
    });
}

mn_status mn_net_width(const mn_net* net, int* out) {
    if (!net || !out) return fail(MN_ERR_INVALID, "null argument");
    *out = int(net->params.width());
    g_last_error.clear();
    return MN_OK;
}

mn_status mn_net_input_dim(const mn_net* net, int* out) {
    if (!net || !out) return fail(MN_ERR_INVALID, "null argument");
    *out = int(net->params.input_dim());
    g_last_error.clear();
    return MN_OK;
}

void mn_net_free(mn_net* net) { delete net; }

} // extern "C"
