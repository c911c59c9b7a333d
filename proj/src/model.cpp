// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "asymspec/error.hpp"
#include "asymspec/kernels.hpp"

namespace asymspec {

namespace {

struct Offsets {
    std::size_t w1, b1, w2, b2, end;
};

// Offsets inside the W block.
Offsets w_offsets(const ModelShape& s) {
    Offsets o{};
    o.w1 = 0;
    o.b1 = o.w1 + s.in_features * s.hidden;
    o.w2 = o.b1 + s.hidden;
    o.b2 = o.w2 + s.hidden * s.classes;
    o.end = o.b2 + s.classes;
    return o;
}

} // namespace

ModelParams::ModelParams(const ModelShape& shape) : shape_(shape), values_(shape.theta_size(), shape.w_size()) {}

ModelParams::ModelParams(const ModelShape& shape, BlockVector values) : shape_(shape), values_(std::move(values)) {
    if (values_.theta_size() != shape.theta_size() || values_.w_size() != shape.w_size())
        throw InputError("ModelParams: vector does not match model shape");
}

std::span<double> ModelParams::w1() noexcept { const auto o = w_offsets(shape_); return values_.w().subspan(o.w1, o.b1 - o.w1); }
std::span<const double> ModelParams::w1() const noexcept { const auto o = w_offsets(shape_); return values_.w().subspan(o.w1, o.b1 - o.w1); }
std::span<double> ModelParams::b1() noexcept { const auto o = w_offsets(shape_); return values_.w().subspan(o.b1, o.w2 - o.b1); }
std::span<const double> ModelParams::b1() const noexcept { const auto o = w_offsets(shape_); return values_.w().subspan(o.b1, o.w2 - o.b1); }
std::span<double> ModelParams::w2() noexcept { const auto o = w_offsets(shape_); return values_.w().subspan(o.w2, o.b2 - o.w2); }
std::span<const double> ModelParams::w2() const noexcept { const auto o = w_offsets(shape_); return values_.w().subspan(o.w2, o.b2 - o.w2); }
std::span<double> ModelParams::b2() noexcept { const auto o = w_offsets(shape_); return values_.w().subspan(o.b2, o.end - o.b2); }
std::span<const double> ModelParams::b2() const noexcept { const auto o = w_offsets(shape_); return values_.w().subspan(o.b2, o.end - o.b2); }

Matrix ModelParams::w1_matrix() const {
    const auto s = w1();
    return Matrix(shape_.in_features, shape_.hidden, std::vector<double>(s.begin(), s.end()));
}

Matrix ModelParams::w2_matrix() const {
    const auto s = w2();
    return Matrix(shape_.hidden, shape_.classes, std::vector<double>(s.begin(), s.end()));
}

ModelParams init_params(std::uint64_t seed, const ModelShape& shape, std::optional<double> init_alpha) {
    if (shape.in_features == 0 || shape.hidden == 0 || shape.classes == 0)
        throw InputError("init_params: dimensions must be positive");
    shape.filter.validate();
    ModelParams p(shape);
    std::mt19937_64 rng(seed);

    auto glorot = [&rng](std::span<double> w, std::size_t fan_in, std::size_t fan_out) {
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> unif(-bound, bound);
        for (auto& v : w) v = unif(rng);
    };
    glorot(p.w1(), shape.in_features, shape.hidden);
    glorot(p.w2(), shape.hidden, shape.classes);

    auto theta = p.theta();
    const std::size_t order = shape.filter.order;
    if (!init_alpha && shape.filter.family == FilterFamily::monomial) init_alpha = 0.1;
    if (init_alpha) {
        const double a = *init_alpha;
        for (std::size_t k = 0; k < order; ++k) theta[k] = a * std::pow(1.0 - a, static_cast<double>(k));
        theta[order] = std::pow(1.0 - a, static_cast<double>(order));
    } else {
        std::fill(theta.begin(), theta.end(), 0.0);
        theta[0] = 1.0;
    }
    return p;
}

namespace {

// Bias broadcast: out[i, :] += b.
void add_bias(Matrix& out, std::span<const double> b) {
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < out.rows(); ++i) k.axpy(out.cols(), 1.0, b.data(), out.row(i).data());
}

std::vector<double> column_sums(const Matrix& m) {
    std::vector<double> s(m.cols(), 0.0);
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < m.rows(); ++i) k.axpy(m.cols(), 1.0, m.row(i).data(), s.data());
    return s;
}

void check_mask(std::span<const std::size_t> mask, std::size_t n, std::size_t n_labels) {
    if (mask.empty()) throw InputError("empty node mask");
    for (auto i : mask)
        if (i >= n || i >= n_labels) throw InputError("mask index " + std::to_string(i) + " out of range");
}

} // namespace

ForwardResult forward(const ModelParams& p, const SparseMatrix& m, const Matrix& x, const ForwardMode& mode) {
    const ModelShape& s = p.shape();
    if (x.cols() != s.in_features)
        throw InputError("forward: features have " + std::to_string(x.cols()) + " columns, model expects " +
                         std::to_string(s.in_features));
    if (m.n_rows() != x.rows()) throw InputError("forward: graph operator and features disagree on node count");

    ForwardCache c;
    std::mt19937_64 rng(mode.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const double p_in = mode.train ? mode.dropout.input : 0.0;
    if (p_in > 0.0) {
        const double keep = 1.0 / (1.0 - p_in);
        c.x_dropped = Matrix(x.rows(), x.cols());
        // One draw per nonzero entry.
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double v = x.data()[i];
            if (v != 0.0) c.x_dropped.data()[i] = unif(rng) < p_in ? 0.0 : v * keep;
        }
    } else {
        c.x_dropped = x;
    }

    c.pre_hidden = matmul(c.x_dropped, p.w1_matrix());
    add_bias(c.pre_hidden, p.b1());

    const double p_h = mode.train ? mode.dropout.hidden : 0.0;
    const double keep_h = p_h > 0.0 ? 1.0 / (1.0 - p_h) : 1.0;
    c.hidden_mask = Matrix(c.pre_hidden.rows(), c.pre_hidden.cols(), 1.0);
    c.hidden_out = Matrix(c.pre_hidden.rows(), c.pre_hidden.cols());
    for (std::size_t i = 0; i < c.pre_hidden.size(); ++i) {
        if (p_h > 0.0) c.hidden_mask.data()[i] = unif(rng) < p_h ? 0.0 : keep_h;
        const double z = c.pre_hidden.data()[i];
        c.hidden_out.data()[i] = (z > 0.0 ? z : 0.0) * c.hidden_mask.data()[i];
    }

    c.mlp_out = matmul(c.hidden_out, p.w2_matrix());
    add_bias(c.mlp_out, p.b2());

    c.filter = apply_filter(s.filter, p.theta(), m, c.mlp_out);
    c.logits = c.filter.output;
    if (!c.logits.all_finite()) throw NumericError("forward: non-finite logits");
    ForwardResult r;
    r.logits = c.logits;
    r.cache = std::move(c);
    return r;
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix p(logits.rows(), logits.cols());
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        const auto row = logits.row(i);
        const double mx = *std::max_element(row.begin(), row.end());
        double z = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            p(i, j) = std::exp(row[j] - mx);
            z += p(i, j);
        }
        for (std::size_t j = 0; j < row.size(); ++j) p(i, j) /= z;
    }
    return p;
}

double empirical_loss(const Matrix& logits, std::span<const std::int32_t> labels, std::span<const std::size_t> mask) {
    check_mask(mask, logits.rows(), labels.size());
    double total = 0.0;
    for (auto i : mask) {
        const auto row = logits.row(i);
        const double mx = *std::max_element(row.begin(), row.end());
        double z = 0.0;
        for (double v : row) z += std::exp(v - mx);
        total += (mx + std::log(z)) - row[static_cast<std::size_t>(labels[i])];
    }
    return total / static_cast<double>(mask.size());
}

GradientBundle backward(const ModelParams& p, const ForwardCache& cache, const SparseMatrix& m,
                        std::span<const std::int32_t> labels, std::span<const std::size_t> mask) {
    const ModelShape& s = p.shape();
    check_mask(mask, cache.logits.rows(), labels.size());
    if (cache.filter.basis.size() != s.theta_size()) throw InputError("backward: cache does not match parameters");

    // dL/dlogits = (softmax - onehot) / m on masked rows.
    Matrix g_logits(cache.logits.rows(), cache.logits.cols());
    const double inv_m = 1.0 / static_cast<double>(mask.size());
    for (auto i : mask) {
        const auto row = cache.logits.row(i);
        const double mx = *std::max_element(row.begin(), row.end());
        double z = 0.0;
        for (double v : row) z += std::exp(v - mx);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double prob = std::exp(row[j] - mx) / z;
            g_logits(i, j) = (prob - (static_cast<std::size_t>(labels[i]) == j ? 1.0 : 0.0)) * inv_m;
        }
    }

    GradientBundle grad(s);

    std::vector<double> g_coeffs(s.theta_size());
    for (std::size_t k = 0; k < g_coeffs.size(); ++k) g_coeffs[k] = frobenius_dot(g_logits, cache.filter.basis[k]);
    if (s.filter.family == FilterFamily::chebyshev_ii) g_coeffs = chebii_theta_gradient(g_coeffs, s.filter.order);
    std::copy(g_coeffs.begin(), g_coeffs.end(), grad.theta().begin());

    // g_theta(M)^T = g_theta(M) for symmetric M.
    const Matrix g_mlp = apply_filter(s.filter, p.theta(), m, g_logits).output;

    const auto gb2 = column_sums(g_mlp);
    std::copy(gb2.begin(), gb2.end(), grad.b2().begin());
    const Matrix gw2 = matmul_at_b(cache.hidden_out, g_mlp);
    std::copy(gw2.flat().begin(), gw2.flat().end(), grad.w2().begin());

    Matrix g_pre = matmul_a_bt(g_mlp, p.w2_matrix());
    for (std::size_t i = 0; i < g_pre.size(); ++i)
        g_pre.data()[i] = cache.pre_hidden.data()[i] > 0.0 ? g_pre.data()[i] * cache.hidden_mask.data()[i] : 0.0;

    const auto gb1 = column_sums(g_pre);
    std::copy(gb1.begin(), gb1.end(), grad.b1().begin());
    const Matrix gw1 = matmul_at_b(cache.x_dropped, g_pre);
    std::copy(gw1.flat().begin(), gw1.flat().end(), grad.w1().begin());
    return grad;
}

double accuracy(const Matrix& logits, std::span<const std::int32_t> labels, std::span<const std::size_t> mask) {
    check_mask(mask, logits.rows(), labels.size());
    std::size_t hit = 0;
    for (auto i : mask) {
        const auto row = logits.row(i);
        const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        if (best == static_cast<std::size_t>(labels[i])) ++hit;
    }
    return 100.0 * static_cast<double>(hit) / static_cast<double>(mask.size());
}

GnnObjective::GnnObjective(const ModelShape& shape, SparseMatrix m, std::shared_ptr<const Matrix> features,
                           std::vector<std::int32_t> labels)
    : shape_(shape), m_(std::move(m)), x_(std::move(features)), labels_(std::move(labels)) {
    if (!x_) throw InputError("GnnObjective: missing features");
    if (x_->rows() != m_.n_rows() || labels_.size() != m_.n_rows())
        throw InputError("GnnObjective: node counts of operator, features and labels differ");
}

double GnnObjective::loss_and_gradient(const ModelParams& p, std::span<const std::size_t> mask, const ForwardMode& mode,
                                       BlockVector& grad) const {
    const auto fwd = forward(p, m_, *x_, mode);
    const double l = empirical_loss(fwd.logits, labels_, mask);
    grad = backward(p, fwd.cache, m_, labels_, mask).values();
    return l;
}

double GnnObjective::loss(const ModelParams& p, std::span<const std::size_t> mask) const {
    return empirical_loss(forward(p, m_, *x_, ForwardMode::eval()).logits, labels_, mask);
}

double GnnObjective::accuracy(const ModelParams& p, std::span<const std::size_t> mask) const {
    return asymspec::accuracy(forward(p, m_, *x_, ForwardMode::eval()).logits, labels_, mask);
}

} // namespace asymspec
