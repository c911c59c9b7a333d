// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "asymspec/basis.hpp"
#include "asymspec/dense.hpp"
#include "asymspec/graphcore.hpp"
#include "asymspec/params.hpp"

namespace asymspec {

/// Dimensions of the spectral GNN  logits = g_theta(M) f_W(X),  with f_W a
/// two-layer ReLU MLP.
struct ModelShape {
    std::size_t in_features = 0;
    std::size_t hidden = 64;
    std::size_t classes = 0;
    FilterSpec filter;

    std::size_t theta_size() const noexcept { return filter.n_coeffs(); }
    std::size_t w_size() const noexcept { return in_features * hidden + hidden + hidden * classes + classes; }
};

/// Parameters laid out flat as [theta; vec(w1); b1; vec(w2); b2] with
/// row-major vec. Biases belong to the W block.
class ModelParams {
public:
    ModelParams() = default;
    explicit ModelParams(const ModelShape& shape);
    ModelParams(const ModelShape& shape, BlockVector values);

    const ModelShape& shape() const noexcept { return shape_; }
    BlockVector& values() noexcept { return values_; }
    const BlockVector& values() const noexcept { return values_; }

    std::span<double> theta() noexcept { return values_.theta(); }
    std::span<const double> theta() const noexcept { return values_.theta(); }
    std::span<double> w1() noexcept;
    std::span<const double> w1() const noexcept;
    std::span<double> b1() noexcept;
    std::span<const double> b1() const noexcept;
    std::span<double> w2() noexcept;
    std::span<const double> w2() const noexcept;
    std::span<double> b2() noexcept;
    std::span<const double> b2() const noexcept;

    Matrix w1_matrix() const;
    Matrix w2_matrix() const;

    friend bool operator==(const ModelParams& a, const ModelParams& b) { return a.values_ == b.values_; }

private:
    ModelShape shape_;
    BlockVector values_;
};

/// Gradients share the parameter layout.
using GradientBundle = ModelParams;

/// Glorot-uniform W, zero biases. Theta: the monomial family (and any family
/// given `init_alpha`) uses theta_k = a(1-a)^k for k < K and theta_K = (1-a)^K;
/// otherwise theta = e_0. The monomial family defaults to a = 0.1.
ModelParams init_params(std::uint64_t seed, const ModelShape& shape, std::optional<double> init_alpha = std::nullopt);

struct DropoutRates {
    double input = 0.0;   ///< applied to X before the first layer
    double hidden = 0.0;  ///< applied to the hidden activations
};

struct ForwardMode {
    bool train = false;
    DropoutRates dropout;
    std::uint64_t seed = 0;

    static ForwardMode eval() { return {}; }
    static ForwardMode training(DropoutRates rates, std::uint64_t seed) { return {true, rates, seed}; }
};

/// Intermediates retained for backward. Dropout uses inverted scaling, so an
/// eval-mode cache is a train-mode cache with all masks equal to one.
struct ForwardCache {
    Matrix x_dropped;     ///< X after input dropout
    Matrix pre_hidden;    ///< x_dropped w1 + b1
    Matrix hidden_mask;   ///< per-entry multiplier: 0 or 1/(1-p)
    Matrix hidden_out;    ///< relu(pre_hidden) * hidden_mask
    Matrix mlp_out;       ///< f_W(X)
    FilterResult filter;  ///< basis blocks of g_theta(M) f_W(X)
    Matrix logits;
};

struct ForwardResult {
    Matrix logits;
    ForwardCache cache;
};

ForwardResult forward(const ModelParams& p, const SparseMatrix& m, const Matrix& x, const ForwardMode& mode);

/// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& logits);

/// Mean softmax cross-entropy over the masked nodes.
double empirical_loss(const Matrix& logits, std::span<const std::int32_t> labels, std::span<const std::size_t> mask);

GradientBundle backward(const ModelParams& p, const ForwardCache& cache, const SparseMatrix& m,
                        std::span<const std::int32_t> labels, std::span<const std::size_t> mask);

/// Percentage of masked nodes whose argmax logit matches the label.
double accuracy(const Matrix& logits, std::span<const std::int32_t> labels, std::span<const std::size_t> mask);

/// A graph, its filter operator and labels, bundled for repeated loss and
/// gradient evaluation.
class GnnObjective {
public:
    GnnObjective(const ModelShape& shape, SparseMatrix m, std::shared_ptr<const Matrix> features,
                 std::vector<std::int32_t> labels);

    const ModelShape& shape() const noexcept { return shape_; }
    const SparseMatrix& graph_operator() const noexcept { return m_; }
    const Matrix& features() const noexcept { return *x_; }
    std::span<const std::int32_t> labels() const noexcept { return labels_; }

    /// Loss over `mask`, writing the gradient into `grad` (same layout as p).
    double loss_and_gradient(const ModelParams& p, std::span<const std::size_t> mask, const ForwardMode& mode,
                             BlockVector& grad) const;
    double loss(const ModelParams& p, std::span<const std::size_t> mask) const;
    double accuracy(const ModelParams& p, std::span<const std::size_t> mask) const;

private:
    ModelShape shape_;
    SparseMatrix m_;
    std::shared_ptr<const Matrix> x_;
    std::vector<std::int32_t> labels_;
};

} // namespace asymspec
