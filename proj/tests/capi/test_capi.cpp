#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "minnorm.h"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("minnorm_capi_" + name);
    fs::remove_all(p);
    return p;
}

mn_config* tiny_config(const fs::path& out) {
    mn_config* cfg = nullptr;
    REQUIRE(mn_config_create(&cfg) == MN_OK);
    const char* kv[][2] = {
        {"data.kind", "abs1d"}, {"data.k_per_side", "3"}, {"model.m", "16"},
        {"init.gain", "0.5"},   {"optim.kind", "adam"},   {"optim.lr", "0.01"},
        {"optim.steps", "200"}, {"seed", "4"},
    };
    for (const auto& p : kv) REQUIRE(mn_config_set(cfg, p[0], p[1]) == MN_OK);
    REQUIRE(mn_config_set(cfg, "output_dir", out.string().c_str()) == MN_OK);
    return cfg;
}

} // namespace

TEST_CASE("config errors carry messages and the right status") {
    mn_config* cfg = nullptr;
    REQUIRE(mn_config_create(&cfg) == MN_OK);
    CHECK(mn_config_set(cfg, "optim.lrr", "0.1") == MN_ERR_CONFIG);
    CHECK(std::string(mn_last_error()).find("optim.lrr") != std::string::npos);
    CHECK(mn_config_set(nullptr, "a", "b") == MN_ERR_INVALID);
    mn_config_free(cfg);

    mn_config* missing = nullptr;
    CHECK(mn_config_load("/nonexistent/path.cfg", &missing) == MN_ERR_CONFIG);
    CHECK(missing == nullptr);
}

TEST_CASE("training through the C API produces a queryable summary") {
    const fs::path out = fresh_dir("train");
    mn_config* cfg = tiny_config(out);
    mn_summary* s = nullptr;
    REQUIRE(mn_run_training(cfg, &s) == MN_OK);
    REQUIRE(s != nullptr);

    CHECK(mn_summary_size(s) > 5);
    double tv = 0.0;
    CHECK(mn_summary_get(s, "tv", &tv) == MN_OK);
    CHECK(tv > 0.0);
    double absent = 0.0;
    CHECK(mn_summary_get(s, "no_such_key", &absent) == MN_ERR_INVALID);
    CHECK(std::string(mn_summary_text(s, "run_dir")) == out.string());
    CHECK(mn_summary_text(s, "nope") == nullptr);

    bool saw_tv = false;
    for (size_t i = 0; i < mn_summary_size(s); ++i)
        if (std::string(mn_summary_key(s, i)) == "tv") saw_tv = true;
    CHECK(saw_tv);
    mn_summary_free(s);

    SUBCASE("net handle evaluates the checkpoint") {
        mn_net* net = nullptr;
        const std::string ckpt = (out / "checkpoint.csv").string();
        REQUIRE(mn_net_load(ckpt.c_str(), &net) == MN_OK);
        int m = 0, d = 0;
        CHECK(mn_net_width(net, &m) == MN_OK);
        CHECK(mn_net_input_dim(net, &d) == MN_OK);
        CHECK(m == 16);
        CHECK(d == 1);
        double x = 1.25, f = 0.0;
        CHECK(mn_net_forward(net, &x, 1, &f) == MN_OK);
        CHECK(std::abs(f - 1.25) < 0.5); // roughly fits |x| even at this size
        CHECK(mn_net_forward(net, &x, 3, &f) == MN_ERR_CONFIG); // shape error
        mn_net_free(net);
    }

    SUBCASE("analyze-1d and spline run off the artifacts") {
        mn_summary* a = nullptr;
        const std::string ckpt = (out / "checkpoint.csv").string();
        const std::string data = (out / "dataset.csv").string();
        REQUIRE(mn_analyze_1d(ckpt.c_str(), data.c_str(), "relu", 0.1, nullptr, &a) == MN_OK);
        double misfit = -1.0;
        CHECK(mn_summary_get(a, "misfit", &misfit) == MN_OK);
        CHECK(misfit >= 0.0);
        mn_summary_free(a);

        mn_summary* sp = nullptr;
        const fs::path table = fs::temp_directory_path() / "minnorm_capi_spline.csv";
        REQUIRE(mn_spline(data.c_str(), 33, table.string().c_str(), &sp) == MN_OK);
        double resid = 1.0;
        CHECK(mn_summary_get(sp, "system_residual", &resid) == MN_OK);
        CHECK(resid < 1e-12);
        CHECK(fs::exists(table));
        fs::remove(table);
        mn_summary_free(sp);
    }

    SUBCASE("render regenerates the figure") {
        const fs::path svg = fs::temp_directory_path() / "minnorm_capi_fig.svg";
        REQUIRE(mn_render_run(out.string().c_str(), svg.string().c_str()) == MN_OK);
        CHECK(fs::exists(svg));
        fs::remove(svg);
    }

    mn_config_free(cfg);
    fs::remove_all(out);
}

TEST_CASE("theory checks through the C API append to checks.csv") {
    const fs::path out = fresh_dir("checks");
    fs::create_directories(out);
    const fs::path checks = out / "checks.csv";

    mn_summary* s = nullptr;
    REQUIRE(mn_check_subgaussian("max_mean", 3, 10, 1.0, 2000, 0.1, 1,
                                 checks.string().c_str(), &s) == MN_OK);
    double sat = 0.0;
    CHECK(mn_summary_get(s, "satisfied", &sat) == MN_OK);
    CHECK(sat == 1.0);
    mn_summary_free(s);

    // a dataset for the rademacher check
    const fs::path data = out / "two.csv";
    std::FILE* f = std::fopen(data.string().c_str(), "w");
    std::fputs("x_1,y\n1,0\n-1,0\n", f);
    std::fclose(f);
    REQUIRE(mn_check_rademacher(data.string().c_str(), 1.0, 16, 100, 10, 2,
                                checks.string().c_str(), &s) == MN_OK);
    double est = 0.0, bound = 0.0;
    CHECK(mn_summary_get(s, "estimate", &est) == MN_OK);
    CHECK(mn_summary_get(s, "bound", &bound) == MN_OK);
    CHECK(est <= bound);
    CHECK(est >= 0.45);
    mn_summary_free(s);

    // two rows + header
    std::FILE* g = std::fopen(checks.string().c_str(), "r");
    int lines = 0;
    for (int c = std::fgetc(g); c != EOF; c = std::fgetc(g))
        if (c == '\n') ++lines;
    std::fclose(g);
    CHECK(lines == 3);
    fs::remove_all(out);
}

TEST_CASE("numeric divergence surfaces as MN_ERR_NUMERIC") {
    const fs::path out = fresh_dir("diverge");
    mn_config* cfg = tiny_config(out);
    REQUIRE(mn_config_set(cfg, "optim.kind", "gd") == MN_OK);
    REQUIRE(mn_config_set(cfg, "optim.lr", "1e18") == MN_OK);
    mn_summary* s = nullptr;
    CHECK(mn_run_training(cfg, &s) == MN_ERR_NUMERIC);
    REQUIRE(s != nullptr); // summary still describes the failed run
    double failed = 0.0;
    CHECK(mn_summary_get(s, "failed", &failed) == MN_OK);
    CHECK(failed == 1.0);
    mn_summary_free(s);
    mn_config_free(cfg);
    fs::remove_all(out);
}

TEST_CASE("version string is present") {
    CHECK(std::string(mn_version()) == "0.1.0");
}
