#include "core/datagen.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace minnorm {

void RadialMixtureConfig::validate() const {
    if (d < 1) throw domain_error("mixture dimension must be >= 1");
    if (!(m1 >= 0.0 && m2 >= 0.0 && m1 + m2 <= 1.0))
        throw domain_error("mixture masses need m1, m2 >= 0 and m1 + m2 <= 1");
    if (!(r_lo >= 1.0)) throw domain_error("outer radius range must start at r_lo >= 1");
    if (!(r_hi >= r_lo)) throw domain_error("outer radius range must have r_hi >= r_lo");
}

Eigen::VectorXd sample_sphere(int d, RngStream& stream) {
    if (d < 1) throw domain_error("sphere dimension must be >= 1");
    Eigen::VectorXd v(d);
    for (;;) {
        for (int i = 0; i < d; ++i) v[i] = stream.normal();
        const double norm = v.norm();
        if (norm > 1e-8) return v / norm;
        // Astronomically unlikely; redraw keeps the vector well-defined.
    }
}

Eigen::MatrixXd sample_radial_mixture(const RadialMixtureConfig& cfg, int n, RngStream stream) {
    cfg.validate();
    if (n < 0) throw domain_error("sample count must be >= 0");
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, cfg.d);
    for (int i = 0; i < n; ++i) {
        RngStream row = stream.substream(std::uint64_t(i));
        const double u = row.uniform01();
        if (u < cfg.m1) continue; // origin row
        Eigen::VectorXd nu = sample_sphere(cfg.d, row);
        if (u < cfg.m1 + cfg.m2) {
            X.row(i) = nu;
        } else {
            X.row(i) = row.uniform(cfg.r_lo, cfg.r_hi) * nu;
        }
    }
    return X;
}

Eigen::VectorXd label_bump(const Eigen::MatrixXd& X) {
    Eigen::VectorXd y(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double norm = X.row(i).norm();
        if (norm == 0.0) {
            y[i] = 1.0;
        } else if (norm >= 1.0 - 1e-9) {
            y[i] = 0.0;
        } else {
            throw domain_error("bump label undefined at row " + std::to_string(i) +
                               " with 0 < |x| = " + format_double(norm) + " < 1");
        }
    }
    return y;
}

Dataset make_radial_bump_dataset(const RadialMixtureConfig& cfg, int n, std::uint64_t seed) {
    Dataset ds;
    ds.X = sample_radial_mixture(cfg, n, RngStream(seed, "data.x"));
    ds.y = label_bump(ds.X);
    ds.meta.generator = "radial_bump";
    ds.meta.seed = seed;
    return ds;
}

Dataset dataset_1d_abs(int k_per_side, double lo, double hi, bool inclusive_endpoints) {
    if (k_per_side < 2) throw domain_error("abs1d grid needs k_per_side >= 2");
    if (!(lo < hi)) throw domain_error("abs1d interval needs lo < hi");
    const int k = k_per_side;
    std::vector<double> pos(k);
    for (int j = 0; j < k; ++j) {
        pos[j] = inclusive_endpoints ? lo + j * (hi - lo) / (k - 1)
                                     : lo + (j + 1) * (hi - lo) / (k + 1);
    }
    Dataset ds;
    ds.X.resize(2 * k, 1);
    ds.y.resize(2 * k);
    for (int j = 0; j < k; ++j) {
        ds.X(j, 0) = -pos[k - 1 - j];
        ds.X(k + j, 0) = pos[j];
    }
    for (int i = 0; i < 2 * k; ++i) ds.y[i] = std::abs(ds.X(i, 0));
    ds.meta.generator = "abs1d";
    return ds;
}

void save_dataset(const std::filesystem::path& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    for (Eigen::Index j = 0; j < ds.dim(); ++j) out << "x_" << (j + 1) << ",";
    out << "y\n";
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
        for (Eigen::Index j = 0; j < ds.dim(); ++j)
            out << format_double(ds.X(i, j)) << ",";
        out << format_double(ds.y[i]) << "\n";
    }
    if (!out) throw io_error("failed writing " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw parse_error("empty dataset file " + path.string(), 1);

    // Header x_1,..,x_d,y fixes the column count.
    long d = 0;
    {
        std::size_t pos = 0, cols = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            ++cols;
            pos = next + 1;
        }
        if (cols < 2) throw parse_error("dataset header needs x_1..x_d,y", 1);
        d = long(cols) - 1;
    }

    std::vector<std::vector<double>> rows;
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
        if (long(vals.size()) != d + 1)
            throw parse_error("expected " + std::to_string(d + 1) + " columns, got " +
                                  std::to_string(vals.size()),
                              lineno);
        rows.push_back(std::move(vals));
    }

    Dataset ds;
    ds.X.resize(Eigen::Index(rows.size()), d);
    ds.y.resize(Eigen::Index(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (long j = 0; j < d; ++j) ds.X(Eigen::Index(i), j) = rows[i][std::size_t(j)];
        ds.y[Eigen::Index(i)] = rows[i].back();
    }
    ds.meta.generator = "file";
    return ds;
}

} // namespace minnorm
