// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/splits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "asymspec/error.hpp"

namespace asymspec {

namespace {

// ceil(frac * n), tolerant of products like 0.025 * 200 = 5.000000000000001.
std::size_t ceil_count(double frac, std::size_t n) {
    return static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n) - 1e-9));
}

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    // Fisher-Yates.
    for (std::size_t i = n; i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(order[i - 1], order[pick(rng)]);
    }
    return order;
}

} // namespace

SplitMasks make_splits(std::size_t n, std::span<const std::int32_t> labels, const SplitPolicy& policy,
                       std::uint64_t seed) {
    if (labels.size() != n) throw InputError("make_splits: label count differs from node count");
    SplitMasks s;
    s.seed = seed;
    s.policy = policy;
    const auto order = shuffled(n, seed);

    if (const auto* f = std::get_if<FractionalSplit>(&policy)) {
        if (!(f->train > 0.0) || !(f->val >= 0.0) || f->train + f->val >= 1.0)
            throw InputError("make_splits: fractions must satisfy 0 < train, 0 <= val, train + val < 1");
        const std::size_t n_train = ceil_count(f->train, n), n_val = ceil_count(f->val, n);
        if (n_train + n_val > n) throw InputError("make_splits: graph too small for the requested fractions");
        s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
        s.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                     order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
        s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
    } else {
        const auto& pc = std::get<PerClassSplit>(policy);
        if (pc.per_class == 0) throw InputError("make_splits: per_class must be positive");
        std::int32_t n_classes = 0;
        for (auto y : labels) {
            if (y < 0) throw InputError("make_splits: negative label");
            n_classes = std::max(n_classes, y + 1);
        }
        std::vector<std::size_t> taken(static_cast<std::size_t>(n_classes), 0);
        std::vector<std::size_t> pool;
        for (auto i : order) {
            auto& c = taken[static_cast<std::size_t>(labels[i])];
            if (c < pc.per_class) {
                s.train.push_back(i);
                ++c;
            } else {
                pool.push_back(i);
            }
        }
        for (std::size_t k = 0; k < taken.size(); ++k)
            if (taken[k] < pc.per_class)
                throw InputError("make_splits: class " + std::to_string(k) + " has only " + std::to_string(taken[k]) +
                                 " nodes, fewer than " + std::to_string(pc.per_class));
        if (pc.n_val + pc.n_test > pool.size())
            throw InputError("make_splits: only " + std::to_string(pool.size()) +
                             " nodes remain for validation and test");
        s.val.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(pc.n_val));
        s.test.assign(pool.begin() + static_cast<std::ptrdiff_t>(pc.n_val),
                      pool.begin() + static_cast<std::ptrdiff_t>(pc.n_val + pc.n_test));
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.val.begin(), s.val.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

} // namespace asymspec
