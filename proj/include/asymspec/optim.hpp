// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asymspec/params.hpp"

namespace asymspec {

enum class OptimizerKind { gd, adam };

std::string_view to_string(OptimizerKind k) noexcept;
OptimizerKind parse_optimizer_kind(std::string_view name);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double lr_theta = 0.01;
    double lr_w = 0.01;
    double weight_decay_theta = 0.0;
    double weight_decay_w = 0.0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    void validate() const;
};

/// Moments and step counter. Copyable so a probe can run on a clone.
class OptimizerState {
public:
    OptimizerState() = default;
    OptimizerState(const OptimizerConfig& cfg, std::size_t theta_size, std::size_t w_size);

    const OptimizerConfig& config() const noexcept { return cfg_; }
    std::uint64_t step() const noexcept { return step_; }
    const BlockVector& first_moment() const noexcept { return m_; }
    const BlockVector& second_moment() const noexcept { return v_; }

    /// Advances the moments with `g` and returns the update direction:
    /// g itself for GD, the bias-corrected m/(sqrt(v)+eps) for Adam.
    BlockVector direction(const BlockVector& g);

private:
    OptimizerConfig cfg_;
    BlockVector m_, v_;
    std::uint64_t step_ = 0;
};

/// p -= lr_block * (delta + weight_decay_block * p), per block.
void apply_update(const OptimizerConfig& cfg, BlockVector& p, const BlockVector& delta);

/// One optimizer step in place. Returns delta.
BlockVector optimizer_step(OptimizerState& st, BlockVector& p, const BlockVector& g);

/// ||grad|| / ||param||, with +inf when only the parameter norm is zero and
/// 0 when both are.
double gpnr(double grad_block_norm, double param_block_norm) noexcept;

double ema_norm_update(double pi_prev, double beta, double current_norm);

struct BlockScales {
    double theta = 1.0;
    double w = 1.0;
};

BlockScales asym_scales(double pi_theta, double pi_w, double delta_theta_norm, double delta_w_norm, double eps_s);

/// Theta block times s.theta, W block times s.w.
BlockVector precondition(const BlockScales& s, const BlockVector& g);

struct PreconditionerState {
    double pi_theta = 0.0;
    double pi_w = 0.0;
    double beta_theta = 0.9;
    double beta_w = 0.9;
    BlockScales scales;
    double eps_s = 1e-12;
};

/// Dominant block eigenvalues sampled during training.
struct BlockSpectrum {
    double lambda_theta = 0.0;
    double lambda_w = 0.0;
    std::optional<double> lambda_full;
};

struct DiagnosticsRecord {
    std::size_t t = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double rho_theta = 0.0;  ///< raw gradient GPNR
    double rho_w = 0.0;
    double rho_theta_pre = 0.0;  ///< GPNR of the gradient handed to the optimizer
    double rho_w_pre = 0.0;
    double s_theta = 1.0;
    double s_w = 1.0;
    double pi_theta = 0.0;
    double pi_w = 0.0;
    std::optional<BlockSpectrum> spectrum;
    std::optional<double> kappa_block;
};

struct TrainConfig {
    OptimizerConfig optimizer;
    bool precondition = true;
    double beta_theta = 0.9;
    double beta_w = 0.9;
    double eps_s = 1e-12;
    std::size_t t_max = 1000;
    std::size_t patience = 200;  ///< 0 disables early stopping
    std::optional<std::pair<double, double>> scale_clamp;
    /// Compute the probe direction and scales even when preconditioning is
    /// off, for diagnostics. Never changes the trajectory.
    bool always_probe = true;
    std::size_t spectrum_interval = 0;  ///< 0 disables Hessian sampling
};

/// Loss on the training set at `params` for iteration t; gradient written to `grad`.
using GradientFn = std::function<double(const BlockVector& params, std::size_t t, BlockVector& grad)>;
using ValidationFn = std::function<double(const BlockVector& params)>;
using SpectrumFn = std::function<BlockSpectrum(const BlockVector& params)>;

struct TrainResult {
    BlockVector best;
    double best_val_loss = 0.0;
    std::size_t best_iteration = 0;
    BlockVector final_params;
    std::size_t iterations = 0;
    bool early_stopped = false;
    bool diverged = false;
    std::string divergence;
    std::vector<DiagnosticsRecord> trace;
};

/// Asymmetric training loop; with `precondition` off it is plain optimizer
/// training with identical bookkeeping.
TrainResult asymmetric_train(const TrainConfig& cfg, BlockVector init, const GradientFn& gradient,
                             const ValidationFn& validation, const SpectrumFn& spectrum = {});

} // namespace asymspec
