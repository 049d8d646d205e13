#include "core/initializers.hpp"

#include <cmath>

#include "core/common.hpp"

namespace minnorm {

InitScheme init_scheme_from_string(std::string_view kind, double gain) {
    InitScheme s;
    s.gain = gain;
    if (kind == "xavier_uniform") s.kind = InitScheme::Kind::xavier_uniform;
    else if (kind == "xavier_normal") s.kind = InitScheme::Kind::xavier_normal;
    else if (kind == "he") s.kind = InitScheme::Kind::he;
    else throw domain_error("unknown init scheme '" + std::string(kind) + "'");
    if (!(s.gain > 0.0)) throw domain_error("init gain must be positive");
    return s;
}

std::string init_scheme_to_string(const InitScheme& s) {
    switch (s.kind) {
    case InitScheme::Kind::xavier_uniform: return "xavier_uniform";
    case InitScheme::Kind::xavier_normal: return "xavier_normal";
    case InitScheme::Kind::he: return "he";
    }
    return "?";
}

Eigen::MatrixXd init_layer(const InitScheme& scheme, int n_in, int n_out,
                           int rows, int cols, RngStream stream) {
    if (n_in <= 0 || n_out <= 0 || rows <= 0 || cols <= 0)
        throw domain_error("init_layer dimensions must be positive");
    if (!(scheme.gain > 0.0))
        throw domain_error("init gain must be positive");

    Eigen::MatrixXd M(rows, cols);
    switch (scheme.kind) {
    case InitScheme::Kind::xavier_uniform: {
        const double h = scheme.gain * std::sqrt(6.0 / (n_in + n_out));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                M(i, j) = stream.uniform(-h, h);
        break;
    }
    case InitScheme::Kind::xavier_normal: {
        const double sd = scheme.gain * std::sqrt(2.0 / (n_in + n_out));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                M(i, j) = stream.normal(0.0, sd);
        break;
    }
    case InitScheme::Kind::he: {
        const double sd = std::sqrt(2.0 / n_in);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                M(i, j) = stream.normal(0.0, sd);
        break;
    }
    }
    return M;
}

NetParams init_net(const InitScheme& scheme, int m, int d, std::uint64_t seed) {
    if (m <= 0 || d <= 0) throw domain_error("network dimensions must be positive");
    NetParams p;
    p.a = init_layer(scheme, m, 1, m, 1, RngStream(seed, "init.a"));
    p.W = init_layer(scheme, d, m, m, d, RngStream(seed, "init.W"));
    p.b = init_layer(scheme, d, m, m, 1, RngStream(seed, "init.b"));
    p.b0 = 0.0;
    return p;
}

DeepNetParams init_deep_net(const InitScheme& scheme, int m, int d, int depth,
                            std::uint64_t seed) {
    if (depth < 2) throw domain_error("deep net needs at least 2 hidden layers");
    DeepNetParams p;
    int in = d;
    for (int l = 0; l <= depth; ++l) {
        const int out = (l == depth) ? 1 : m;
        const std::string wt = "init.deep.W" + std::to_string(l);
        const std::string bt = "init.deep.b" + std::to_string(l);
        p.weights.push_back(init_layer(scheme, in, out, out, in, RngStream(seed, wt)));
        p.biases.push_back(init_layer(scheme, in, out, out, 1, RngStream(seed, bt)));
        in = out;
    }
    return p;
}

} // namespace minnorm
