// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "asymspec/optim.hpp"
#include "asymspec/params.hpp"

namespace asymspec {

/// Deterministic loss-and-gradient evaluator at a parameter point.
using GradientOracle = std::function<double(const BlockVector& p, BlockVector& grad)>;

/// v -> H v for some fixed symmetric H.
using LinearOperator = std::function<BlockVector(const BlockVector& v)>;

/// Central-difference Hessian-vector product along v/||v||, rescaled by ||v||.
/// The step is rel_eps * (1 + ||p||).
BlockVector hvp(const GradientOracle& oracle, const BlockVector& p, const BlockVector& v, double rel_eps = 1e-4);

/// Zero every coordinate outside `b`.
void restrict_to_block(BlockVector& v, Block b) noexcept;

struct EigenEstimate {
    double lambda = 0.0;    ///< signed Rayleigh quotient of the dominant eigenvector
    double residual = 0.0;  ///< ||Hv - lambda v|| / |lambda|
    std::size_t iterations = 0;
    bool converged = false;
};

struct PowerOptions {
    double tol = 1e-6;
    std::size_t max_iter = 1000;
    std::uint64_t seed = 0;
};

/// Power iteration on the block submatrix of `op`.
EigenEstimate block_lambda_max(const LinearOperator& op, std::size_t theta_size, std::size_t w_size, Block b,
                               const PowerOptions& opts);

/// Same, with the operator given by finite-difference HVPs at p.
EigenEstimate block_lambda_max(const GradientOracle& oracle, const BlockVector& p, Block b, const PowerOptions& opts,
                               double rel_eps = 1e-4);

/// max(l_theta, l_w) / min(l_theta, l_w). Throws ParameterError unless both are positive.
double block_condition_number(double lambda_theta, double lambda_w);

struct SpectrumReport {
    EigenEstimate theta;
    EigenEstimate w;
    std::optional<EigenEstimate> full;
    std::optional<double> kappa_block;  ///< absent when a block maximum is not positive
};

SpectrumReport spectrum_report(const GradientOracle& oracle, const BlockVector& p, bool include_full,
                               const PowerOptions& opts, double rel_eps = 1e-4);

/// Adapter for training-time sampling.
SpectrumFn make_spectrum_fn(GradientOracle oracle, PowerOptions opts, bool include_full = false,
                            double rel_eps = 1e-4);

struct ProbePoint {
    double rho = 0.0;  ///< full-vector GPNR
    double lambda_max = 0.0;
    bool bound_holds = false;  ///< rho <= lambda_max
};

struct MildScalingCheck {
    std::size_t t = 0;
    double scale_ratio = 0.0;   ///< s_theta / s_w
    double lambda_ratio = 0.0;  ///< lambda_WW / lambda_ThetaTheta
    bool holds = false;
};

struct AuditReport {
    ProbePoint first;
    ProbePoint second;
    /// rho and lambda_max are ordered the same way across the two points.
    bool covary = false;
    bool points_equal = false;

    std::vector<MildScalingCheck> mild_scaling;
    std::size_t mild_scaling_violations = 0;

    double lambda_full = 0.0;
    double lambda_theta = 0.0;
    double lambda_w = 0.0;
    bool full_ge_theta = false;
    bool theta_ge_w = false;
    bool ordering_holds() const noexcept { return full_ge_theta && theta_ge_w; }
};

struct AuditOptions {
    double noise_scale = 0.1;
    std::uint64_t seed = 0;
    PowerOptions power;
    double rel_eps = 1e-4;
};

/// Perturbation, mild-scaling and ordering checks around the best checkpoint.
/// Violations are recorded, never thrown.
AuditReport assumption_audit(const TrainResult& trained, const GradientOracle& oracle, const AuditOptions& opts);

} // namespace asymspec
