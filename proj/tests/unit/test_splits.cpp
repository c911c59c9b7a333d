// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "asymspec/error.hpp"
#include "asymspec/splits.hpp"

namespace {

using namespace asymspec;

std::vector<std::int32_t> cyclic_labels(std::size_t n, std::int32_t c) {
    std::vector<std::int32_t> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<std::int32_t>(i % static_cast<std::size_t>(c));
    return y;
}

void expect_partition(const SplitMasks& s, std::size_t n, bool covers) {
    std::set<std::size_t> all;
    for (const auto* part : {&s.train, &s.val, &s.test}) {
        EXPECT_TRUE(std::is_sorted(part->begin(), part->end()));
        for (auto i : *part) {
            EXPECT_LT(i, n);
            EXPECT_TRUE(all.insert(i).second) << "node " << i << " in two parts";
        }
    }
    if (covers) EXPECT_EQ(all.size(), n);
}

TEST(Splits, FractionalSizesForSmallGraph) {
    auto y = cyclic_labels(183, 5);
    auto s = make_splits(183, y, FractionalSplit{}, 0);
    EXPECT_EQ(s.train.size(), 5u);
    EXPECT_EQ(s.val.size(), 5u);
    EXPECT_EQ(s.test.size(), 173u);
    expect_partition(s, 183, true);
}

TEST(Splits, ExactProductIsNotRoundedUp) {
    auto y = cyclic_labels(200, 2);
    auto s = make_splits(200, y, FractionalSplit{}, 1);
    EXPECT_EQ(s.train.size(), 5u);
    EXPECT_EQ(s.val.size(), 5u);
}

TEST(Splits, DenseSplit) {
    auto y = cyclic_labels(1000, 3);
    auto s = make_splits(1000, y, FractionalSplit{0.6, 0.2}, 4);
    EXPECT_EQ(s.train.size(), 600u);
    EXPECT_EQ(s.val.size(), 200u);
    EXPECT_EQ(s.test.size(), 200u);
}

TEST(Splits, PerClassSizes) {
    auto y = cyclic_labels(2708, 7);
    auto s = make_splits(2708, y, PerClassSplit{}, 3);
    EXPECT_EQ(s.train.size(), 140u);
    EXPECT_EQ(s.val.size(), 500u);
    EXPECT_EQ(s.test.size(), 1000u);
    std::vector<int> per(7, 0);
    for (auto i : s.train) ++per[static_cast<std::size_t>(y[i])];
    for (int c : per) EXPECT_EQ(c, 20);
    expect_partition(s, 2708, false);
}

TEST(Splits, PerClassNamesShortClass) {
    auto y = cyclic_labels(100, 4);
    y[3] = 0;
    std::replace(y.begin(), y.end(), 3, 0);
    y[99] = 3;
    try {
        make_splits(100, y, PerClassSplit{20, 10, 10}, 0);
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("class 3"), std::string::npos) << e.what();
    }
}

TEST(Splits, PerClassNeedsEnoughRemainingNodes) {
    auto y = cyclic_labels(100, 2);
    EXPECT_THROW(make_splits(100, y, PerClassSplit{20, 50, 50}, 0), InputError);
}

TEST(Splits, SeedDeterminism) {
    auto y = cyclic_labels(300, 3);
    auto a = make_splits(300, y, FractionalSplit{0.1, 0.1}, 9);
    auto b = make_splits(300, y, FractionalSplit{0.1, 0.1}, 9);
    auto c = make_splits(300, y, FractionalSplit{0.1, 0.1}, 10);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.val, b.val);
    EXPECT_EQ(a.test, b.test);
    EXPECT_NE(a.train, c.train);
}

TEST(Splits, RandomizedPartitionProperty) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> size(20, 400);
    std::uniform_real_distribution<double> frac(0.01, 0.45);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = size(rng);
        auto y = cyclic_labels(n, 3);
        auto s = make_splits(n, y, FractionalSplit{frac(rng), frac(rng)}, rng());
        expect_partition(s, n, true);
        EXPECT_FALSE(s.train.empty());
    }
}

TEST(Splits, InvalidArguments) {
    auto y = cyclic_labels(10, 2);
    EXPECT_THROW(make_splits(11, y, FractionalSplit{}, 0), InputError);
    EXPECT_THROW(make_splits(10, y, FractionalSplit{0.0, 0.1}, 0), InputError);
    EXPECT_THROW(make_splits(10, y, FractionalSplit{0.6, 0.5}, 0), InputError);
}

} // namespace
