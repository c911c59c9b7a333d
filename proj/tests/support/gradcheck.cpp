// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "oracles.hpp"

namespace oracle {

double GradCheck::worst() const { return std::max({theta, w1, b1, w2, b2}); }

double relative_error(std::span<const double> analytic, std::span<const double> numeric) {
    double diff = 0.0, na = 0.0, nf = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
        na += analytic[i] * analytic[i];
        nf += numeric[i] * numeric[i];
    }
    const double scale = std::sqrt(std::max(na, nf));
    return scale < 1e-10 ? std::sqrt(diff) : std::sqrt(diff) / scale;
}

GradCheck gnn_gradient_check(const asymspec::FilterSpec& spec, std::uint64_t seed, const asymspec::ForwardMode& mode,
                             std::size_t n, double h) {
    using namespace asymspec;
    std::mt19937_64 rng(seed);
    const std::size_t d = 4, classes = 3;
    Graph g = random_graph(n, d, classes, 0.2, rng);
    ModelShape shape{d, 8, classes, spec};
    GnnObjective obj(shape, graph_matrix(g, spec.graph_operator()), std::make_shared<const Matrix>(g.features), g.labels);

    ModelParams p = init_params(seed + 1, shape);
    std::normal_distribution<double> nd(0.0, 0.3);
    for (auto& t : p.theta()) t += nd(rng);
    for (auto& b : p.b1()) b = nd(rng);
    for (auto& b : p.b2()) b = nd(rng);

    std::vector<std::size_t> mask;
    for (std::size_t i = 0; i < n; i += 2) mask.push_back(i);

    BlockVector grad;
    obj.loss_and_gradient(p, mask, mode, grad);

    auto f = [&](const std::vector<double>& v) {
        ModelParams q(shape, BlockVector(shape.theta_size(), v));
        BlockVector unused;
        return obj.loss_and_gradient(q, mask, mode, unused);
    };
    const auto all = p.values().all();
    const auto fd = fd_gradient(f, std::vector<double>(all.begin(), all.end()), h);
    ModelParams num(shape, BlockVector(shape.theta_size(), fd));
    ModelParams ana(shape, grad);

    GradCheck r;
    r.theta = relative_error(ana.theta(), num.theta());
    r.w1 = relative_error(ana.w1(), num.w1());
    r.b1 = relative_error(ana.b1(), num.b1());
    r.w2 = relative_error(ana.w2(), num.w2());
    r.b2 = relative_error(ana.b2(), num.b2());
    return r;
}

} // namespace oracle
