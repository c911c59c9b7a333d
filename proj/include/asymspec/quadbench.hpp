// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "asymspec/dense.hpp"
#include "asymspec/params.hpp"

namespace asymspec {

/// L(psi) = 1/2 (psi - psi*)^T H (psi - psi*) over a [theta; w] split.
struct QuadraticProblem {
    std::size_t d_theta = 0;
    std::size_t d_w = 0;
    Matrix h;
    std::vector<double> minimizer;
    std::vector<double> spectrum_theta;  ///< prescribed diagonal-block spectra
    std::vector<double> spectrum_w;
    double lambda_theta = 0.0;  ///< achieved block maxima
    double lambda_w = 0.0;
    double lambda_max = 0.0;  ///< full matrix
    double lambda_min = 0.0;

    std::size_t dim() const noexcept { return d_theta + d_w; }
    double loss(const BlockVector& psi) const;
    BlockVector gradient(const BlockVector& psi) const;
    /// H v
    BlockVector apply(const BlockVector& v) const;
    BlockVector minimizer_vector() const { return BlockVector(d_theta, minimizer); }
};

/// Diagonal blocks with prescribed maxima under random orthogonal conjugation,
/// an off-diagonal block of spectral norm coupling * sqrt(l_theta * l_w), then
/// an eigenvalue floor at zero.
QuadraticProblem synth_quadratic(std::size_t d_theta, std::size_t d_w, double lambda_theta, double lambda_w,
                                 double coupling, std::uint64_t seed);

/// Quadratic with explicit H and minimizer; block maxima are recomputed.
QuadraticProblem make_quadratic(std::size_t d_theta, Matrix h, std::vector<double> minimizer);

struct TheoremRecord {
    std::size_t t = 0;
    double rho_theta = 0.0;
    double rho_w = 0.0;
    double s_theta = 1.0;
    double s_w = 1.0;
    double kappa = 0.0;        ///< block condition number of H
    double kappa_scaled = 0.0; ///< block condition number of R H
    bool ordering = false;        ///< lambda_ThetaTheta >= lambda_WW
    bool proportional_gpnr = false;  ///< block GPNRs ordered like the block maxima
    bool mild_scaling = false;    ///< s_theta / s_w >= lambda_WW / lambda_ThetaTheta
    bool proximity = false;       ///< ||psi - psi*|| <= ||psi||
    /// Full-vector GPNR of this iterate against the previous one
    /// (the block maxima are constant on a quadratic, so only the GPNR order matters).
    bool consecutive_pair_gpnr = false;
    bool hypotheses() const noexcept { return ordering && proportional_gpnr && mild_scaling; }
    bool theorem_holds = false;  ///< kappa_scaled <= kappa
    /// |kappa_scaled - (s_theta/s_w) kappa| / kappa, when both block orderings hold.
    std::optional<double> identity_error;
};

struct TheoremTrial {
    std::vector<TheoremRecord> records;
    BlockVector final_point;
    bool diverged = false;
};

struct TheoremOptions {
    double lr = 0.05;
    std::size_t iterations = 50;
    double eps_s = 1e-12;
    std::optional<double> common_scale;  ///< force s_theta = s_w
};

/// Asymmetric GD with exact gradients; block maxima of R H are s_theta l_theta and s_w l_w.
TheoremTrial theorem_trial(const QuadraticProblem& q, const BlockVector& start, const TheoremOptions& opts);

struct TheoremSummary {
    std::size_t trials = 0;
    std::size_t iterations = 0;
    std::size_t hypotheses_held = 0;
    std::size_t theorem_held = 0;  ///< among iterations whose hypotheses held
    std::size_t diverged_trials = 0;
    double max_identity_error = 0.0;
    std::size_t identity_checks = 0;
    /// Iterations where the scaled-matrix inequality fails with proportional
    /// GPNR and mild scaling holding but the block ordering not.
    std::size_t unordered_failures = 0;
    std::size_t consecutive_pair_held = 0;
    double satisfied_fraction() const noexcept {
        return hypotheses_held == 0 ? 0.0 : static_cast<double>(theorem_held) / static_cast<double>(hypotheses_held);
    }
};

/// Random problems, starts and step sizes.
TheoremSummary run_theorem_trials(std::size_t n_trials, std::uint64_t seed, std::size_t iterations = 50);

struct GpnrBoundReport {
    std::size_t points = 0;
    std::size_t proximity_valid = 0;
    std::size_t excluded = 0;
    std::size_t satisfied = 0;  ///< among proximity-valid points
    double max_ratio = 0.0;     ///< max rho / lambda_max over valid points
    double fraction() const noexcept {
        return proximity_valid == 0 ? 0.0 : static_cast<double>(satisfied) / static_cast<double>(proximity_valid);
    }
};

/// rho = ||H (psi - psi*)|| / ||psi||
double quadratic_gpnr(const QuadraticProblem& q, const BlockVector& psi);

/// Points psi* + r u with u uniform on the sphere and r uniform in [0, noise_scale].
GpnrBoundReport gpnr_bound_trial(const QuadraticProblem& q, double noise_scale, std::size_t n_points,
                                 std::uint64_t seed);

} // namespace asymspec
