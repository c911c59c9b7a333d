// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace asymspec {

/// Which diagonal block of the parameter vector a quantity refers to.
enum class Block { theta, w, full };

/// Flat parameter (or gradient) vector split into the graph-convolution block
/// Theta, stored first, and the feature-transformation block W.
class BlockVector {
public:
    BlockVector() = default;
    BlockVector(std::size_t theta_size, std::size_t w_size, double fill = 0.0)
        : theta_size_(theta_size), values_(theta_size + w_size, fill) {}
    BlockVector(std::size_t theta_size, std::vector<double> values);

    std::size_t theta_size() const noexcept { return theta_size_; }
    std::size_t w_size() const noexcept { return values_.size() - theta_size_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<double> all() noexcept { return values_; }
    std::span<const double> all() const noexcept { return values_; }
    std::span<double> theta() noexcept { return all().first(theta_size_); }
    std::span<const double> theta() const noexcept { return all().first(theta_size_); }
    std::span<double> w() noexcept { return all().subspan(theta_size_); }
    std::span<const double> w() const noexcept { return all().subspan(theta_size_); }
    std::span<double> block(Block b) noexcept;
    std::span<const double> block(Block b) const noexcept;

    double theta_norm() const;
    double w_norm() const;
    double norm(Block b) const;

    bool same_shape(const BlockVector& o) const noexcept {
        return theta_size_ == o.theta_size_ && values_.size() == o.values_.size();
    }
    bool all_finite() const noexcept;

    friend bool operator==(const BlockVector&, const BlockVector&) = default;

private:
    std::size_t theta_size_ = 0;
    std::vector<double> values_;
};

} // namespace asymspec
