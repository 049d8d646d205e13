#include <doctest.h>

#include "core/common.hpp"
#include "core/config.hpp"

using namespace minnorm;

TEST_CASE("config parsing: comments, spaces, dotted keys") {
    const RunConfig cfg = RunConfig::from_string(
        "# 1d experiment\n"
        "data.kind = abs1d\n"
        "data.k_per_side=15   # the grid\n"
        "model.m = 200\n"
        "init.scheme = xavier_uniform\n"
        "init.gain = 0.5\n"
        "optim.kind = adam\n"
        "optim.lr = 5e-5\n"
        "optim.steps = 1000\n"
        "optim.schedule = 50:0.1,100:0.1\n"
        "lambda = 0.002\n"
        "seed = 7\n");
    CHECK(cfg.m == 200);
    CHECK(cfg.init.gain == 0.5);
    CHECK(cfg.optim.lr == doctest::Approx(5e-5));
    CHECK(cfg.optim.schedule.size() == 2);
    CHECK(cfg.optim.schedule[1].epoch == 100);
    CHECK(cfg.lambda == 0.002);
    CHECK(cfg.seed == 7);
    cfg.validate();
}

TEST_CASE("unknown keys are rejected (typo safety)") {
    CHECK_THROWS_AS(RunConfig::from_string("optim.lrr = 0.1\n"), config_error);
    CHECK_THROWS_AS(RunConfig::from_string("weird\n"), config_error);
    RunConfig c;
    CHECK_THROWS_AS(c.set("data.kind", "blob"), config_error);
    CHECK_THROWS_AS(c.set("optim.lr", "fast"), config_error);
}

TEST_CASE("canonical string round-trips with a stable hash") {
    RunConfig cfg = RunConfig::from_string(
        "data.kind = radial_bump\ndata.n = 100\ndata.d = 15\nmodel.m = 64\n"
        "optim.kind = momentum\noptim.steps = 10\nseed = 3\n"
        "sweep.triples = 100:0.1;400:0.05\n");
    const RunConfig twin = RunConfig::from_string(cfg.canonical_string());
    CHECK(twin.hash() == cfg.hash());
    CHECK(twin.canonical_string() == cfg.canonical_string());
    // output_dir is not part of the identity
    RunConfig moved = cfg;
    moved.output_dir = "/tmp/elsewhere";
    CHECK(moved.hash() == cfg.hash());
}

TEST_CASE("validation catches bad combinations") {
    RunConfig cfg;
    cfg.epochs = 10;
    cfg.steps = 10;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg.steps = 0;
    cfg.epochs = 0;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg.epochs = 10;
    cfg.validate();

    RunConfig radial = cfg;
    radial.data_kind = "radial_bump";
    radial.data_n = 0;
    CHECK_THROWS_AS(radial.validate(), config_error);

    RunConfig leak = cfg;
    leak.activation = Activation::relu();
    leak.activation.kind = Activation::Kind::leaky_relu;
    leak.activation.slope = 1.5;
    CHECK_THROWS_AS(leak.validate(), config_error);

    RunConfig lb = cfg;
    lb.optim.kind = OptimizerSpec::Kind::lbfgs;
    lb.optim.batch_size = 10;
    CHECK_THROWS_AS(lb.validate(), config_error);
}

TEST_CASE("sweep coupling must move m up and lambda down") {
    RunConfig cfg;
    cfg.epochs = 1;
    cfg.set("sweep.triples", "100:0.1;400:0.1"); // lambda constant while claiming decay
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg.set("sweep.triples", "100:0.1;400:0.05;1600:0.025");
    cfg.validate();
    CHECK(cfg.sweep_triples.size() == 3);
    cfg.set("sweep.triples", "100:0.1:500;400:0.05:2000");
    CHECK(cfg.sweep_triples[1].n == 2000);
}

TEST_CASE("grid specs parse as lo:hi:count") {
    const GridSpec g = parse_grid("0:7:15");
    CHECK(g.lo == 0.0);
    CHECK(g.hi == 7.0);
    CHECK(g.count == 15);
    CHECK(g.linear_values().size() == 15);
    CHECK(g.linear_values()[14] == doctest::Approx(7.0));
    CHECK_THROWS_AS(parse_grid("0-7-15"), config_error);
}
