#include "core/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "core/common.hpp"
#include "core/datagen.hpp"

namespace minnorm {

std::vector<double> GridSpec::linear_values() const {
    if (count < 1 || !(hi >= lo)) throw domain_error("grid needs lo <= hi and count >= 1");
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < count; ++i)
        v[std::size_t(i)] = lo + (hi - lo) * double(i) / double(count - 1);
    return v;
}

GridSpec parse_grid(std::string_view s) {
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
        throw config_error("grid spec must be lo:hi:count, got '" + std::string(s) + "'");
    GridSpec g;
    g.lo = parse_double(s.substr(0, c1));
    g.hi = parse_double(s.substr(c1 + 1, c2 - c1 - 1));
    g.count = int(parse_int(s.substr(c2 + 1)));
    return g;
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error("key '" + key + "' expects true|false, got '" + v + "'");
}

std::vector<ScheduleEntry> parse_schedule(const std::string& v) {
    std::vector<ScheduleEntry> out;
    if (v.empty()) return out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        std::size_t next = v.find(',', pos);
        if (next == std::string::npos) next = v.size();
        const std::string item = v.substr(pos, next - pos);
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw config_error("schedule entries are epoch:factor, got '" + item + "'");
        out.push_back({int(parse_int(item.substr(0, colon))),
                       parse_double(item.substr(colon + 1))});
        pos = next + 1;
    }
    return out;
}

std::vector<SweepTriple> parse_triples(const std::string& v) {
    std::vector<SweepTriple> out;
    if (v.empty()) return out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        std::size_t next = v.find(';', pos);
        if (next == std::string::npos) next = v.size();
        const std::string item = v.substr(pos, next - pos);
        const auto c1 = item.find(':');
        if (c1 == std::string::npos)
            throw config_error("sweep triples are m:lambda[:n], got '" + item + "'");
        const auto c2 = item.find(':', c1 + 1);
        SweepTriple t;
        t.m = int(parse_int(item.substr(0, c1)));
        if (c2 == std::string::npos) {
            t.lambda = parse_double(item.substr(c1 + 1));
        } else {
            t.lambda = parse_double(item.substr(c1 + 1, c2 - c1 - 1));
            t.n = int(parse_int(item.substr(c2 + 1)));
        }
        out.push_back(t);
        pos = next + 1;
    }
    return out;
}

std::string schedule_to_string(const std::vector<ScheduleEntry>& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i].epoch) + ":" + format_double(s[i].factor);
    }
    return out;
}

std::string triples_to_string(const std::vector<SweepTriple>& ts) {
    std::string out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out += ";";
        out += std::to_string(ts[i].m) + ":" + format_double(ts[i].lambda);
        if (ts[i].n > 0) out += ":" + std::to_string(ts[i].n);
    }
    return out;
}

std::string grid_to_string(const GridSpec& g) {
    return format_double(g.lo) + ":" + format_double(g.hi) + ":" + std::to_string(g.count);
}

} // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    try {
        if (key == "data.kind") {
            if (value != "abs1d" && value != "radial_bump" && value != "file")
                throw config_error("data.kind must be abs1d|radial_bump|file");
            data_kind = value;
        } else if (key == "data.k_per_side") k_per_side = int(parse_int(value));
        else if (key == "data.lo") data_lo = parse_double(value);
        else if (key == "data.hi") data_hi = parse_double(value);
        else if (key == "data.inclusive_endpoints") inclusive_endpoints = parse_bool(value, key);
        else if (key == "data.n") data_n = int(parse_int(value));
        else if (key == "data.d") data_d = int(parse_int(value));
        else if (key == "data.m1") m1 = parse_double(value);
        else if (key == "data.m2") m2 = parse_double(value);
        else if (key == "data.r_lo") r_lo = parse_double(value);
        else if (key == "data.r_hi") r_hi = parse_double(value);
        else if (key == "data.path") data_path = value;
        else if (key == "model.m") m = int(parse_int(value));
        else if (key == "model.activation") {
            if (value == "relu") activation.kind = Activation::Kind::relu;
            else if (value == "leaky_relu") activation.kind = Activation::Kind::leaky_relu;
            else throw config_error("model.activation must be relu|leaky_relu");
        } else if (key == "model.leaky_slope") activation.slope = parse_double(value);
        else if (key == "model.frozen_inner") frozen_inner = parse_bool(value, key);
        else if (key == "model.depth") depth = int(parse_int(value));
        else if (key == "init.scheme") init = init_scheme_from_string(value, init.gain);
        else if (key == "init.gain") init.gain = parse_double(value);
        else if (key == "optim.kind") optim.kind = optimizer_kind_from_string(value);
        else if (key == "optim.lr") optim.lr = parse_double(value);
        else if (key == "optim.mu") optim.mu = parse_double(value);
        else if (key == "optim.beta1") optim.beta1 = parse_double(value);
        else if (key == "optim.beta2") optim.beta2 = parse_double(value);
        else if (key == "optim.eps") optim.eps = parse_double(value);
        else if (key == "optim.batch_size") optim.batch_size = int(parse_int(value));
        else if (key == "optim.epochs") epochs = int(parse_int(value));
        else if (key == "optim.steps") steps = parse_int(value);
        else if (key == "optim.schedule") optim.schedule = parse_schedule(value);
        else if (key == "optim.history") optim.history = int(parse_int(value));
        else if (key == "optim.max_line_search") optim.max_line_search = int(parse_int(value));
        else if (key == "loss") loss = loss_from_string(value);
        else if (key == "lambda") lambda = parse_double(value);
        else if (key == "analysis.radii") radii = parse_grid(value);
        else if (key == "analysis.n_dirs") n_dirs = int(parse_int(value));
        else if (key == "analysis.reference_profile") reference_profile = value;
        else if (key == "analysis.rescale_grid") rescale_grid = parse_grid(value);
        else if (key == "seed") seed = std::uint64_t(parse_int(value));
        else if (key == "output_dir") output_dir = value;
        else if (key == "single_thread") single_thread = parse_bool(value, key);
        else if (key == "sweep.triples") sweep_triples = parse_triples(value);
        else if (key == "sweep.seeds") sweep_seeds = int(parse_int(value));
        else throw config_error("unknown config key '" + key + "'");
    } catch (const parse_error& e) {
        throw config_error("key '" + key + "': " + e.what());
    } catch (const domain_error& e) {
        throw config_error("key '" + key + "': " + e.what());
    }
}

RunConfig RunConfig::from_string(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected key=value");
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        cfg.set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

void RunConfig::validate() const {
    if (data_kind == "abs1d") {
        if (k_per_side < 2) throw config_error("data.k_per_side must be >= 2");
        if (!(data_lo < data_hi)) throw config_error("data interval needs lo < hi");
    } else if (data_kind == "radial_bump") {
        if (data_n < 1) throw config_error("data.n must be >= 1 for radial data");
        RadialMixtureConfig mix{data_d, m1, m2, r_lo, r_hi};
        try {
            mix.validate();
        } catch (const domain_error& e) {
            throw config_error(e.what());
        }
    } else if (data_kind == "file") {
        if (data_path.empty()) throw config_error("data.path is required for data.kind=file");
        if (!std::filesystem::exists(data_path))
            throw config_error("data.path does not exist: " + data_path);
    }
    if (m < 1) throw config_error("model.m must be >= 1");
    if (depth < 1) throw config_error("model.depth must be >= 1");
    if (depth > 1 && frozen_inner)
        throw config_error("model.frozen_inner applies to depth 1 only");
    if (activation.kind == Activation::Kind::leaky_relu &&
        !(activation.slope > 0.0 && activation.slope < 1.0))
        throw config_error("model.leaky_slope must lie in (0, 1)");
    if (!(init.gain > 0.0)) throw config_error("init.gain must be positive");
    if (lambda < 0.0) throw config_error("lambda must be >= 0");
    if ((epochs > 0) == (steps > 0))
        throw config_error("set exactly one of optim.epochs and optim.steps");
    try {
        optim.validate();
    } catch (const domain_error& e) {
        throw config_error(e.what());
    }
    if (optim.kind == OptimizerSpec::Kind::lbfgs && optim.batch_size != 0)
        throw config_error("L-BFGS runs full batch; leave optim.batch_size at 0");
    if (n_dirs < 2) throw config_error("analysis.n_dirs must be >= 2");
    if (!reference_profile.empty() && !std::filesystem::exists(reference_profile))
        throw config_error("analysis.reference_profile does not exist: " + reference_profile);
    if (!sweep_triples.empty()) {
        for (std::size_t i = 0; i + 1 < sweep_triples.size(); ++i) {
            const auto& a = sweep_triples[i];
            const auto& b = sweep_triples[i + 1];
            if (!(b.m > a.m) || !(b.lambda < a.lambda) || !(b.m * b.lambda >= a.m * a.lambda))
                throw config_error(
                    "sweep.triples must couple m up, lambda down, with m*lambda nondecreasing");
        }
        if (sweep_seeds < 1) throw config_error("sweep.seeds must be >= 1");
    }
}

std::string RunConfig::canonical_string() const {
    std::vector<std::string> lines = {
        "analysis.n_dirs=" + std::to_string(n_dirs),
        "analysis.radii=" + grid_to_string(radii),
        "analysis.reference_profile=" + reference_profile,
        "analysis.rescale_grid=" + grid_to_string(rescale_grid),
        "data.d=" + std::to_string(data_d),
        "data.hi=" + format_double(data_hi),
        "data.inclusive_endpoints=" + std::string(inclusive_endpoints ? "true" : "false"),
        "data.k_per_side=" + std::to_string(k_per_side),
        "data.kind=" + data_kind,
        "data.lo=" + format_double(data_lo),
        "data.m1=" + format_double(m1),
        "data.m2=" + format_double(m2),
        "data.n=" + std::to_string(data_n),
        "data.path=" + data_path,
        "data.r_hi=" + format_double(r_hi),
        "data.r_lo=" + format_double(r_lo),
        "init.gain=" + format_double(init.gain),
        "init.scheme=" + init_scheme_to_string(init),
        "lambda=" + format_double(lambda),
        "loss=" + loss_to_string(loss),
        "model.activation=" +
            std::string(activation.kind == Activation::Kind::relu ? "relu" : "leaky_relu"),
        "model.depth=" + std::to_string(depth),
        "model.frozen_inner=" + std::string(frozen_inner ? "true" : "false"),
        "model.leaky_slope=" + format_double(activation.slope),
        "model.m=" + std::to_string(m),
        "optim.batch_size=" + std::to_string(optim.batch_size),
        "optim.beta1=" + format_double(optim.beta1),
        "optim.beta2=" + format_double(optim.beta2),
        "optim.epochs=" + std::to_string(epochs),
        "optim.eps=" + format_double(optim.eps),
        "optim.history=" + std::to_string(optim.history),
        "optim.kind=" + optimizer_kind_to_string(optim.kind),
        "optim.lr=" + format_double(optim.lr),
        "optim.max_line_search=" + std::to_string(optim.max_line_search),
        "optim.mu=" + format_double(optim.mu),
        "optim.schedule=" + schedule_to_string(optim.schedule),
        "optim.steps=" + std::to_string(steps),
        "seed=" + std::to_string(seed),
        "single_thread=" + std::string(single_thread ? "true" : "false"),
        "sweep.seeds=" + std::to_string(sweep_seeds),
        "sweep.triples=" + triples_to_string(sweep_triples),
    };
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += "\n";
    }
    return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical_string()); }

} // namespace minnorm
