#include "core/nn_model.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include "core/common.hpp"

namespace minnorm {

Activation Activation::leaky(double slope) {
    if (!(slope > 0.0 && slope < 1.0))
        throw domain_error("leaky ReLU slope must lie in (0, 1)");
    return {Kind::leaky_relu, slope};
}

void NetParams::check_consistent() const {
    const Eigen::Index m = a.size();
    if (W.rows() != m || b.size() != m)
        throw shape_error("a, W, b disagree on the number of neurons");
    if (!a.allFinite() || !W.allFinite() || !b.allFinite() || !std::isfinite(b0))
        throw numeric_error("network parameters contain non-finite entries");
}

Gradients Gradients::zero_like(const NetParams& p) {
    Gradients g;
    g.da = Eigen::VectorXd::Zero(p.a.size());
    g.dW = Eigen::MatrixXd::Zero(p.W.rows(), p.W.cols());
    g.db = Eigen::VectorXd::Zero(p.b.size());
    g.db0 = 0.0;
    return g;
}

void Gradients::set_zero() {
    da.setZero();
    dW.setZero();
    db.setZero();
    db0 = 0.0;
}

bool Gradients::all_finite() const {
    return da.allFinite() && dW.allFinite() && db.allFinite() && std::isfinite(db0);
}

namespace {

// Shared per-row kernel: z and s are scratch of length m. Returns f(x).
// Both forward() and forward_batch() funnel through here so their
// summation order is identical per row.
double forward_row(const NetParams& p, const Activation& act, const Eigen::VectorXd& x,
                   Eigen::VectorXd& z, Eigen::VectorXd& s) {
    z.noalias() = p.W * x;
    z += p.b;
    const Eigen::Index m = z.size();
    for (Eigen::Index i = 0; i < m; ++i)
        s[i] = activate(act, z[i]);
    return p.b0 + p.a.dot(s);
}

void check_input_dim(const NetParams& p, Eigen::Index d) {
    if (d != p.input_dim())
        throw shape_error("input has dimension " + std::to_string(d) + ", network expects " +
                          std::to_string(p.input_dim()));
}

} // namespace

double forward(const NetParams& p, const Activation& act, const Eigen::VectorXd& x) {
    check_input_dim(p, x.size());
    Eigen::VectorXd z(p.width()), s(p.width());
    return forward_row(p, act, x, z, s);
}

Eigen::VectorXd forward_batch(const NetParams& p, const Activation& act,
                              const Eigen::MatrixXd& X) {
    if (X.rows() > 0) check_input_dim(p, X.cols());
    Eigen::VectorXd out(X.rows());
    Eigen::VectorXd x(X.cols()), z(p.width()), s(p.width());
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
        x = X.row(r);
        out[r] = forward_row(p, act, x, z, s);
    }
    return out;
}

void backward_into(const NetParams& p, const Activation& act, LossKind loss,
                   double lambda, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const int* rows, int count, Gradients& grads,
                   double& risk, double& fit_risk) {
    if (count <= 0) throw domain_error("backward requires a nonempty batch");
    if (lambda < 0.0) throw domain_error("lambda must be nonnegative");
    check_input_dim(p, X.cols());

    const Eigen::Index m = p.width();
    grads.set_zero();
    Eigen::VectorXd x(X.cols()), z(m), s(m), coef(m);
    double loss_sum = 0.0;
    const double inv2n = 1.0 / (2.0 * count);

    for (int k = 0; k < count; ++k) {
        const int r = rows[k];
        x = X.row(r);
        const double f = forward_row(p, act, x, z, s);
        loss_sum += loss_value(loss, f, y[r]);
        const double g = inv2n * loss_derivative(loss, f, y[r]);
        grads.da += g * s;
        for (Eigen::Index i = 0; i < m; ++i)
            coef[i] = g * p.a[i] * activate_grad(act, z[i]);
        grads.dW.noalias() += coef * x.transpose();
        grads.db += coef;
        grads.db0 += g;
    }

    grads.da += lambda * p.a;
    grads.dW += lambda * p.W;
    if (p.frozen_inner) {
        grads.dW.setZero();
        grads.db.setZero();
    }

    fit_risk = inv2n * loss_sum;
    risk = fit_risk + lambda * weight_decay(p);
    if (!std::isfinite(risk) || !grads.all_finite())
        throw numeric_error("non-finite value in risk or gradient");
}

BackwardResult backward(const NetParams& p, const Activation& act, LossKind loss,
                        double lambda, const Dataset& batch) {
    if (batch.n() == 0) throw domain_error("backward requires a nonempty batch");
    std::vector<int> rows(static_cast<std::size_t>(batch.n()));
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
    BackwardResult res;
    res.grads = Gradients::zero_like(p);
    backward_into(p, act, loss, lambda, batch.X, batch.y, rows.data(),
                  static_cast<int>(rows.size()), res.grads, res.risk, res.fit_risk);
    return res;
}

double weight_decay(const NetParams& p) {
    return 0.5 * (p.a.squaredNorm() + p.W.squaredNorm());
}

double path_norm(const NetParams& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.width(); ++i)
        s += std::abs(p.a[i]) * p.W.row(i).norm();
    return s;
}

void DeepNetParams::check_consistent() const {
    if (weights.empty() || weights.size() != biases.size())
        throw shape_error("deep net needs matching weight/bias sequences");
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].rows() != biases[l].size())
            throw shape_error("bias length mismatch in layer " + std::to_string(l));
        if (l + 1 < weights.size() && weights[l + 1].cols() != weights[l].rows())
            throw shape_error("layer widths do not compose at layer " + std::to_string(l));
    }
    if (weights.back().rows() != 1)
        throw shape_error("deep net output dimension must be 1");
}

double deep_forward(const DeepNetParams& p, const Activation& act, const Eigen::VectorXd& x) {
    p.check_consistent();
    if (x.size() != p.input_dim()) throw shape_error("deep net input dimension mismatch");
    Eigen::VectorXd h = x;
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        Eigen::VectorXd z = p.weights[l] * h + p.biases[l];
        if (l + 1 == p.weights.size()) {
            h = z; // linear output layer
        } else {
            for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = activate(act, z[i]);
            h = z;
        }
    }
    return h[0];
}

DeepBackwardResult deep_backward(const DeepNetParams& p, const Activation& act, LossKind loss,
                                 double lambda, const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y, const int* rows, int count) {
    p.check_consistent();
    if (count <= 0) throw domain_error("backward requires a nonempty batch");
    const std::size_t L = p.weights.size();
    DeepBackwardResult res;
    res.dweights.resize(L);
    res.dbiases.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        res.dweights[l] = Eigen::MatrixXd::Zero(p.weights[l].rows(), p.weights[l].cols());
        res.dbiases[l] = Eigen::VectorXd::Zero(p.biases[l].size());
    }

    std::vector<Eigen::VectorXd> pre(L), post(L + 1);
    double loss_sum = 0.0;
    const double inv2n = 1.0 / (2.0 * count);
    for (int k = 0; k < count; ++k) {
        post[0] = X.row(rows[k]);
        for (std::size_t l = 0; l < L; ++l) {
            pre[l] = p.weights[l] * post[l] + p.biases[l];
            post[l + 1] = pre[l];
            if (l + 1 < L)
                for (Eigen::Index i = 0; i < post[l + 1].size(); ++i)
                    post[l + 1][i] = activate(act, pre[l][i]);
        }
        const double f = post[L][0];
        loss_sum += loss_value(loss, f, y[rows[k]]);
        const double g = inv2n * loss_derivative(loss, f, y[rows[k]]);

        Eigen::VectorXd delta = Eigen::VectorXd::Constant(1, g);
        for (std::size_t l = L; l-- > 0;) {
            res.dweights[l].noalias() += delta * post[l].transpose();
            res.dbiases[l] += delta;
            if (l > 0) {
                Eigen::VectorXd back = p.weights[l].transpose() * delta;
                for (Eigen::Index i = 0; i < back.size(); ++i)
                    back[i] *= activate_grad(act, pre[l - 1][i]);
                delta = back;
            }
        }
    }

    double wd = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        res.dweights[l] += lambda * p.weights[l];
        wd += 0.5 * p.weights[l].squaredNorm();
    }
    res.fit_risk = inv2n * loss_sum;
    res.risk = res.fit_risk + lambda * wd;
    if (!std::isfinite(res.risk))
        throw numeric_error("non-finite value in deep risk");
    return res;
}

void save_checkpoint(const std::filesystem::path& path, const NetParams& p) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    out << "kind,i,j,value\n";
    for (Eigen::Index i = 0; i < p.a.size(); ++i)
        out << "a," << i << ",0," << format_double(p.a[i]) << "\n";
    for (Eigen::Index i = 0; i < p.W.rows(); ++i)
        for (Eigen::Index j = 0; j < p.W.cols(); ++j)
            out << "W," << i << "," << j << "," << format_double(p.W(i, j)) << "\n";
    for (Eigen::Index i = 0; i < p.b.size(); ++i)
        out << "b," << i << ",0," << format_double(p.b[i]) << "\n";
    out << "b0,0,0," << format_double(p.b0) << "\n";
    if (!out) throw io_error("failed writing " + path.string());
}

NetParams load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "kind,i,j,value")
        throw parse_error("bad checkpoint header in " + path.string(), 1);

    struct Entry { long i, j; double v; };
    std::vector<Entry> ea, eb, ew;
    double b0 = 0.0;
    bool saw_b0 = false;
    long m = 0, d = 0;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::array<std::string, 4> fields;
        std::size_t pos = 0;
        for (int f = 0; f < 4; ++f) {
            std::size_t next = f < 3 ? line.find(',', pos) : line.size();
            if (next == std::string::npos) throw parse_error("expected 4 fields", lineno);
            fields[f] = line.substr(pos, next - pos);
            pos = next + 1;
        }
        Entry e{parse_int(fields[1]), parse_int(fields[2]), parse_double(fields[3])};
        if (fields[0] == "a") {
            ea.push_back(e);
            m = std::max(m, e.i + 1);
        } else if (fields[0] == "W") {
            ew.push_back(e);
            m = std::max(m, e.i + 1);
            d = std::max(d, e.j + 1);
        } else if (fields[0] == "b") {
            eb.push_back(e);
            m = std::max(m, e.i + 1);
        } else if (fields[0] == "b0") {
            b0 = e.v;
            saw_b0 = true;
        } else {
            throw parse_error("unknown parameter kind '" + fields[0] + "'", lineno);
        }
    }
    if (!saw_b0 || ea.size() != std::size_t(m) || eb.size() != std::size_t(m) ||
        ew.size() != std::size_t(m) * std::size_t(d))
        throw parse_error("incomplete checkpoint " + path.string());

    NetParams p;
    p.a = Eigen::VectorXd::Zero(m);
    p.W = Eigen::MatrixXd::Zero(m, d);
    p.b = Eigen::VectorXd::Zero(m);
    p.b0 = b0;
    for (const auto& e : ea) p.a[e.i] = e.v;
    for (const auto& e : ew) p.W(e.i, e.j) = e.v;
    for (const auto& e : eb) p.b[e.i] = e.v;
    p.check_consistent();
    return p;
}

} // namespace minnorm
