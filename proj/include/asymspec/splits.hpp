// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace asymspec {

/// Shuffle all nodes; ceil(train * n) train, ceil(val * n) validation, the rest test.
struct FractionalSplit {
    double train = 0.025;
    double val = 0.025;
};

/// First `per_class` shuffled nodes of each class train; validation and test
/// are drawn in shuffled order from the remaining pool.
struct PerClassSplit {
    std::size_t per_class = 20;
    std::size_t n_val = 500;
    std::size_t n_test = 1000;
};

using SplitPolicy = std::variant<FractionalSplit, PerClassSplit>;

/// Index sets are sorted ascending and pairwise disjoint.
struct SplitMasks {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
    SplitPolicy policy;
};

/// Throws InputError for an infeasible policy, naming the short class.
SplitMasks make_splits(std::size_t n, std::span<const std::int32_t> labels, const SplitPolicy& policy,
                       std::uint64_t seed);

} // namespace asymspec
