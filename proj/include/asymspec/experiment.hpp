// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asymspec/basis.hpp"
#include "asymspec/dataset.hpp"
#include "asymspec/hessian.hpp"
#include "asymspec/model.hpp"
#include "asymspec/optim.hpp"
#include "asymspec/splits.hpp"

namespace asymspec {

struct ExperimentConfig {
    FilterSpec filter;
    std::optional<double> init_alpha;
    std::size_t hidden = 64;
    OptimizerConfig optimizer{OptimizerKind::adam, 0.01, 0.01, 0.0005, 0.0005, 0.9, 0.999, 1e-8};
    DropoutRates dropout{0.5, 0.5};
    double beta_theta = 0.9;
    double beta_w = 0.9;
    std::size_t t_max = 1000;
    std::size_t patience = 200;
    std::optional<std::pair<double, double>> scale_clamp;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    SplitPolicy split = FractionalSplit{};
    /// Hessian block maxima are sampled every this many iterations; 0 disables.
    std::size_t spectrum_interval = 0;
    PowerOptions power{1e-4, 100, 0};
    double hvp_rel_eps = 1e-4;

    void validate() const;
};

/// Missing keys keep their defaults; unknown keys are rejected. Throws ConfigError.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& file);
std::string config_to_json(const ExperimentConfig& cfg);

enum class Arm { baseline, asymmetric };
std::string_view to_string(Arm a) noexcept;

struct SeedResult {
    std::uint64_t seed = 0;
    Arm arm = Arm::baseline;
    double test_accuracy = 0.0;
    double val_accuracy = 0.0;
    double train_accuracy = 0.0;
    double best_val_loss = 0.0;
    std::size_t best_iteration = 0;
    std::size_t iterations = 0;
    bool diverged = false;
    std::string divergence;
    double seconds = 0.0;
    TrainResult train;
};

struct RunReport {
    Arm arm = Arm::baseline;
    std::vector<SeedResult> runs;
    double mean = 0.0;  ///< over non-diverged runs
    double std = 0.0;   ///< unbiased; 0 with fewer than two runs
    std::size_t n_valid = 0;
    double seconds = 0.0;
};

void aggregate(RunReport& r);

struct ExperimentResult {
    ExperimentConfig config;
    std::string dataset;
    DatasetStats stats;
    std::optional<RunReport> baseline;
    std::optional<RunReport> asymmetric;
    /// mean(asymmetric) - mean(baseline) when both arms ran
    std::optional<double> delta() const;
};

/// Everything one (seed, arm) run needs, built once per seed so both arms
/// share splits and initial parameters.
struct SeedSetup {
    ModelShape shape;
    SplitMasks splits;
    ModelParams init;
};

SeedSetup make_seed_setup(const ExperimentConfig& cfg, const DatasetBundle& data, std::uint64_t seed);

/// Shared, immutable per-dataset state.
struct PreparedData {
    std::shared_ptr<const Matrix> features;
    SparseMatrix op;
    std::vector<std::int32_t> labels;
};

PreparedData prepare(const ExperimentConfig& cfg, const DatasetBundle& data);

/// Eval-mode training-loss oracle for Hessian probes.
GradientOracle make_train_oracle(const GnnObjective& obj, const ModelShape& shape, std::vector<std::size_t> train);

SeedResult train_seed(const ExperimentConfig& cfg, const PreparedData& prep, const SeedSetup& setup, Arm arm);

using ProgressFn = std::function<void(const SeedResult&)>;

/// Runs the selected arms over every seed on a worker pool capped by
/// ASYMSPEC_THREADS (default: hardware concurrency).
ExperimentResult run_experiment(const ExperimentConfig& cfg, const DatasetBundle& data, bool run_baseline,
                                bool run_asymmetric, const ProgressFn& progress = {});

std::size_t worker_count();

} // namespace asymspec
