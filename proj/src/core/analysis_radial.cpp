#include "core/analysis_radial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "core/common.hpp"
#include "core/datagen.hpp"

namespace minnorm {

RadialProfile radial_stats(const PointEvaluator& evaluate, int d,
                           const std::vector<double>& radii, int n_dirs, RngStream stream) {
    if (d < 1) throw domain_error("radial_stats needs d >= 1");
    if (n_dirs < 2) throw domain_error("radial_stats needs n_dirs >= 2");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (radii[k] < 0.0) throw domain_error("radii must be nonnegative");
        if (k > 0 && !(radii[k] > radii[k - 1]))
            throw domain_error("radii must be strictly increasing");
    }

    std::vector<Eigen::VectorXd> dirs(static_cast<std::size_t>(n_dirs));
    for (int j = 0; j < n_dirs; ++j) {
        RngStream sub = stream.substream(std::uint64_t(j));
        dirs[std::size_t(j)] = sample_sphere(d, sub);
    }

    RadialProfile prof;
    prof.radii = radii;
    prof.n_dirs = n_dirs;
    prof.d = d;
    prof.mean.reserve(radii.size());
    prof.std_dev.reserve(radii.size());
    std::vector<double> vals(static_cast<std::size_t>(n_dirs));
    for (double r : radii) {
        double sum = 0.0;
        for (int j = 0; j < n_dirs; ++j) {
            vals[std::size_t(j)] = evaluate(r * dirs[std::size_t(j)]);
            sum += vals[std::size_t(j)];
        }
        const double mean = sum / n_dirs;
        double ssq = 0.0;
        for (int j = 0; j < n_dirs; ++j) {
            const double dv = vals[std::size_t(j)] - mean;
            ssq += dv * dv;
        }
        prof.mean.push_back(mean);
        prof.std_dev.push_back(std::sqrt(ssq / n_dirs));
    }
    return prof;
}

void save_profile(const std::filesystem::path& path, const RadialProfile& profile) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    out << (profile.has_std ? "r,mean,std\n" : "r,mean\n");
    for (std::size_t k = 0; k < profile.radii.size(); ++k) {
        out << format_double(profile.radii[k]) << "," << format_double(profile.mean[k]);
        if (profile.has_std) out << "," << format_double(profile.std_dev[k]);
        out << "\n";
    }
    if (!out) throw io_error("failed writing " + path.string());
}

RadialProfile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty profile file " + path.string(), 1);
    bool has_std;
    if (line == "r,mean,std") has_std = true;
    else if (line == "r,mean") has_std = false;
    else throw parse_error("profile header must be r,mean[,std]", 1);

    RadialProfile prof;
    prof.has_std = has_std;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> vals;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            try {
                vals.push_back(parse_double(std::string_view(line).substr(pos, next - pos)));
            } catch (const parse_error& e) {
                throw parse_error(e.what(), lineno);
            }
            pos = next + 1;
        }
        if (vals.size() != std::size_t(has_std ? 3 : 2))
            throw parse_error("wrong column count in profile", lineno);
        if (!prof.radii.empty() && !(vals[0] > prof.radii.back()))
            throw parse_error("profile radii must be strictly increasing", lineno);
        prof.radii.push_back(vals[0]);
        prof.mean.push_back(vals[1]);
        prof.std_dev.push_back(has_std ? vals[2] : 0.0);
    }
    if (prof.radii.empty()) throw parse_error("profile has no rows in " + path.string());
    return prof;
}

double eval_profile(const RadialProfile& profile, double r) {
    if (profile.radii.empty()) throw domain_error("cannot evaluate an empty profile");
    const auto& xs = profile.radii;
    if (r <= xs.front()) return profile.mean.front();
    if (r >= xs.back()) return profile.mean.back();
    const std::size_t hi = std::size_t(std::upper_bound(xs.begin(), xs.end(), r) - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (r - xs[lo]) / (xs[hi] - xs[lo]);
    return profile.mean[lo] + t * (profile.mean[hi] - profile.mean[lo]);
}

std::vector<double> RescaleGrid::values() const {
    if (count < 1 || !(lo > 0.0) || !(hi >= lo))
        throw domain_error("rescale grid needs 0 < lo <= hi and count >= 1");
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < count; ++i)
        v[std::size_t(i)] = lo * std::exp(ratio * double(i) / double(count - 1));
    return v;
}

RescaleFit fit_rescale(const RadialProfile& measured, const RadialProfile& reference,
                       const RescaleGrid& grid) {
    if (measured.radii.empty() || reference.radii.empty())
        throw domain_error("fit_rescale needs nonempty profiles");
    const std::vector<double> candidates = grid.values();

    // Trapezoid quadrature weights over the measured radii.
    const std::size_t K = measured.radii.size();
    std::vector<double> w(K, 1.0);
    if (K > 1) {
        w[0] = (measured.radii[1] - measured.radii[0]) / 2.0;
        w[K - 1] = (measured.radii[K - 1] - measured.radii[K - 2]) / 2.0;
        for (std::size_t k = 1; k + 1 < K; ++k)
            w[k] = (measured.radii[k + 1] - measured.radii[k - 1]) / 2.0;
    }

    RescaleFit fit;
    fit.grid = grid;
    bool first = true;
    for (double r : candidates) {
        double disc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double gap = measured.mean[k] - eval_profile(reference, r * measured.radii[k]);
            disc += w[k] * gap * gap;
        }
        if (first || disc < fit.l2_discrepancy) {
            fit.r = r;
            fit.l2_discrepancy = disc;
            first = false;
        }
    }
    return fit;
}

} // namespace minnorm
