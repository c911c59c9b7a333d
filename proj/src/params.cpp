// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/params.hpp"

#include <algorithm>
#include <cmath>

#include "asymspec/dense.hpp"
#include "asymspec/error.hpp"

namespace asymspec {

BlockVector::BlockVector(std::size_t theta_size, std::vector<double> values)
    : theta_size_(theta_size), values_(std::move(values)) {
    if (theta_size_ > values_.size()) throw InputError("BlockVector: theta block larger than vector");
}

std::span<double> BlockVector::block(Block b) noexcept {
    switch (b) {
        case Block::theta: return theta();
        case Block::w: return w();
        case Block::full: break;
    }
    return all();
}

std::span<const double> BlockVector::block(Block b) const noexcept {
    switch (b) {
        case Block::theta: return theta();
        case Block::w: return w();
        case Block::full: break;
    }
    return all();
}

double BlockVector::theta_norm() const { return l2_norm(theta()); }
double BlockVector::w_norm() const { return l2_norm(w()); }
double BlockVector::norm(Block b) const { return l2_norm(block(b)); }

bool BlockVector::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

} // namespace asymspec
