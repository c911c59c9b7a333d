// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "asymspec/error.hpp"
#include "asymspec/experiment.hpp"
#include "oracles.hpp"

namespace {

using namespace asymspec;

DatasetBundle small_dataset() {
    std::mt19937_64 rng(77);
    return {oracle::random_graph(40, 6, 3, 0.1, rng), "rand40", "unit test"};
}

ExperimentConfig quick_config() {
    ExperimentConfig c;
    c.filter = FilterSpec{FilterFamily::chebyshev, 3};
    c.hidden = 8;
    c.t_max = 30;
    c.patience = 0;
    c.seeds = {0, 1, 2};
    c.split = FractionalSplit{0.3, 0.2};
    return c;
}

TEST(Experiment, DefaultsAreValid) {
    ExperimentConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.filter.order, 10u);
    EXPECT_EQ(c.seeds.size(), 10u);
    EXPECT_EQ(c.hidden, 64u);
    EXPECT_DOUBLE_EQ(c.dropout.input, 0.5);
}

TEST(Experiment, ConfigFromJson) {
    auto c = config_from_json(R"({"model": "bernnet", "order": 4, "optimizer": "sgd", "lr_theta": 0.2,
                                 "seeds": 3, "split": {"policy": "per_class", "per_class": 5, "n_val": 10, "n_test": 20},
                                 "scale_clamp": [0.5, 4.0]})");
    EXPECT_EQ(c.filter.family, FilterFamily::bernstein);
    EXPECT_EQ(c.filter.order, 4u);
    EXPECT_EQ(c.optimizer.kind, OptimizerKind::gd);
    EXPECT_DOUBLE_EQ(c.optimizer.lr_theta, 0.2);
    EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{0, 1, 2}));
    ASSERT_TRUE(std::holds_alternative<PerClassSplit>(c.split));
    EXPECT_EQ(std::get<PerClassSplit>(c.split).per_class, 5u);
    ASSERT_TRUE(c.scale_clamp.has_value());
    EXPECT_DOUBLE_EQ(c.scale_clamp->second, 4.0);

    auto l = config_from_json(R"({"seeds": [4, 8]})");
    EXPECT_EQ(l.seeds, (std::vector<std::uint64_t>{4, 8}));
}

TEST(Experiment, ConfigErrors) {
    EXPECT_THROW(config_from_json("{"), ConfigError);
    EXPECT_THROW(config_from_json("[]"), ConfigError);
    EXPECT_THROW(config_from_json(R"({"learning_rate": 0.1})"), ConfigError);
    EXPECT_THROW(config_from_json(R"({"dropout_input": 1.0})"), ConfigError);
    EXPECT_THROW(config_from_json(R"({"model": "jacobi", "jacobi_a": -1.0})"), ConfigError);
    EXPECT_THROW(config_from_json(R"({"optimizer": "lbfgs"})"), ConfigError);
    EXPECT_THROW(config_from_json(R"({"seeds": 0})"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Experiment, ConfigJsonRoundTrip) {
    auto c = quick_config();
    c.filter = FilterSpec{FilterFamily::jacobi, 6, 0.5, 1.5};
    c.init_alpha = 0.2;
    c.scale_clamp = std::make_pair(0.25, 8.0);
    c.optimizer.lr_w = 0.003;
    auto back = config_from_json(config_to_json(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c));
    EXPECT_EQ(back.filter.family, FilterFamily::jacobi);
    EXPECT_DOUBLE_EQ(back.filter.jacobi_b, 1.5);
    EXPECT_EQ(back.seeds, c.seeds);
    EXPECT_DOUBLE_EQ(*back.init_alpha, 0.2);
}

TEST(Experiment, AggregateSkipsDivergedRuns) {
    RunReport r;
    for (double a : {60.0, 70.0, 80.0}) {
        SeedResult s;
        s.test_accuracy = a;
        r.runs.push_back(s);
    }
    SeedResult bad;
    bad.test_accuracy = 0.0;
    bad.diverged = true;
    r.runs.push_back(bad);
    aggregate(r);
    EXPECT_EQ(r.n_valid, 3u);
    EXPECT_DOUBLE_EQ(r.mean, 70.0);
    EXPECT_DOUBLE_EQ(r.std, 10.0);

    RunReport one;
    one.runs.resize(1);
    one.runs[0].test_accuracy = 55.0;
    aggregate(one);
    EXPECT_DOUBLE_EQ(one.mean, 55.0);
    EXPECT_DOUBLE_EQ(one.std, 0.0);
}

TEST(Experiment, ArmsShareSplitsAndInitialization) {
    auto data = small_dataset();
    auto cfg = quick_config();
    auto a = make_seed_setup(cfg, data, 5);
    auto b = make_seed_setup(cfg, data, 5);
    EXPECT_EQ(a.splits.train, b.splits.train);
    EXPECT_EQ(a.init, b.init);
    auto c = make_seed_setup(cfg, data, 6);
    EXPECT_NE(a.splits.train, c.splits.train);

    auto res = run_experiment(cfg, data, true, true);
    ASSERT_TRUE(res.baseline && res.asymmetric);
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        const auto& s = res.baseline->runs[i];
        const auto& as = res.asymmetric->runs[i];
        EXPECT_EQ(s.seed, as.seed);
        EXPECT_EQ(s.arm, Arm::baseline);
        EXPECT_EQ(as.arm, Arm::asymmetric);
        // Identical start, so the first recorded losses coincide.
        EXPECT_EQ(s.train.trace.front().train_loss, as.train.trace.front().train_loss);
        EXPECT_EQ(s.train.trace.front().val_loss, as.train.trace.front().val_loss);
    }
    ASSERT_TRUE(res.delta().has_value());
    EXPECT_DOUBLE_EQ(*res.delta(), res.asymmetric->mean - res.baseline->mean);
}

TEST(Experiment, RunsAreDeterministic) {
    auto data = small_dataset();
    auto cfg = quick_config();
    auto a = run_experiment(cfg, data, false, true);
    auto b = run_experiment(cfg, data, false, true);
    ASSERT_FALSE(a.baseline.has_value());
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        EXPECT_EQ(a.asymmetric->runs[i].train.best, b.asymmetric->runs[i].train.best);
        EXPECT_EQ(a.asymmetric->runs[i].test_accuracy, b.asymmetric->runs[i].test_accuracy);
    }
    EXPECT_FALSE(a.delta().has_value());
}

TEST(Experiment, ProgressCallbackSeesEveryRun) {
    auto data = small_dataset();
    auto cfg = quick_config();
    std::size_t calls = 0;
    run_experiment(cfg, data, true, true, [&](const SeedResult&) { ++calls; });
    EXPECT_EQ(calls, 2 * cfg.seeds.size());
}

TEST(Experiment, SpectrumSamplingPopulatesTrace) {
    auto data = small_dataset();
    auto cfg = quick_config();
    cfg.seeds = {0};
    cfg.spectrum_interval = 10;
    auto res = run_experiment(cfg, data, false, true);
    std::size_t sampled = 0;
    for (const auto& r : res.asymmetric->runs[0].train.trace)
        if (r.spectrum) ++sampled;
    EXPECT_EQ(sampled, 4u);
}

TEST(Experiment, WorkerCountHonoursEnvironment) {
    ::setenv("ASYMSPEC_THREADS", "3", 1);
    EXPECT_EQ(worker_count(), 3u);
    ::unsetenv("ASYMSPEC_THREADS");
    EXPECT_GE(worker_count(), 1u);
}

TEST(Experiment, ArmNames) {
    EXPECT_EQ(to_string(Arm::baseline), "S");
    EXPECT_EQ(to_string(Arm::asymmetric), "AS");
}

} // namespace
