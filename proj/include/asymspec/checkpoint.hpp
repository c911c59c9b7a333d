// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "asymspec/experiment.hpp"

namespace asymspec {

/// Best parameters of one run with the trace needed to audit it.
struct Checkpoint {
    ExperimentConfig config;
    std::string dataset;
    std::uint64_t seed = 0;
    Arm arm = Arm::baseline;
    ModelShape shape;
    TrainResult train;  ///< best, best_val_loss, best_iteration and trace are restored
};

Checkpoint make_checkpoint(const ExperimentConfig& cfg, const std::string& dataset, const ModelShape& shape,
                           const SeedResult& run);

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& file);

/// Throws LoadError.
Checkpoint load_checkpoint(const std::filesystem::path& file);

} // namespace asymspec
