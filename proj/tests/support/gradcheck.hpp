// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "asymspec/basis.hpp"
#include "asymspec/model.hpp"

namespace oracle {

struct GradCheck {
    double theta = 0.0;  ///< relative error of the filter-coefficient gradient
    double w1 = 0.0;
    double b1 = 0.0;
    double w2 = 0.0;
    double b2 = 0.0;

    double worst() const;
};

/// Relative error ||a - f|| / max(||a||, ||f||), or the absolute error when both norms are below 1e-10.
double relative_error(std::span<const double> analytic, std::span<const double> numeric);

/// Analytic gradient of the masked loss against central differences with step `h`,
/// on a random graph of `n` nodes. A training `mode` uses fixed dropout masks.
GradCheck gnn_gradient_check(const asymspec::FilterSpec& spec, std::uint64_t seed, const asymspec::ForwardMode& mode,
                             std::size_t n = 20, double h = 1e-5);

} // namespace oracle
