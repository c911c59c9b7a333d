// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "asymspec/dataset.hpp"
#include "asymspec/error.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

using namespace asymspec;

const fs::path kToy = fs::path(ASYMSPEC_TEST_DATA) / "toy4";

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("asymspec_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

    void write(const std::string& name, const std::string& text) const { std::ofstream(path_ / name) << text; }
    void copy_toy() const {
        for (auto f : {"meta.json", "edges.csv", "features.csv", "labels.csv"}) fs::copy_file(kToy / f, path_ / f);
    }

private:
    fs::path path_;
};

std::string load_error(const fs::path& dir) {
    try {
        load_dataset(dir);
    } catch (const LoadError& e) {
        return e.what();
    }
    return {};
}

TEST(Dataset, LoadsToyFixture) {
    auto d = load_dataset(kToy);
    EXPECT_EQ(d.name, "toy4");
    EXPECT_EQ(d.graph.n_nodes, 4u);
    EXPECT_EQ(d.graph.features.cols(), 2u);
    EXPECT_EQ(d.graph.n_classes, 2u);
    EXPECT_EQ(d.graph.edges.size(), 4u);
    EXPECT_EQ(d.graph.labels, (std::vector<std::int32_t>{0, 0, 1, 1}));
    EXPECT_DOUBLE_EQ(d.graph.features(1, 0), 0.9);
}

TEST(Dataset, ToyStatistics) {
    auto s = dataset_stats(load_dataset(kToy));
    EXPECT_EQ(s.n_nodes, 4u);
    EXPECT_EQ(s.n_edges, 4u);
    ASSERT_TRUE(s.edge_homophily.has_value());
    EXPECT_DOUBLE_EQ(*s.edge_homophily, 0.5);
    // A 4-cycle is bipartite: the normalized adjacency has eigenvalues +-1.
    EXPECT_NEAR(s.operator_radius, 1.0, 1e-8);
}

TEST(Dataset, MissingDirectory) {
    EXPECT_NE(load_error(kToy / "nope").find("nope"), std::string::npos);
}

TEST(Dataset, BadFeatureRowNamesLine) {
    TempDir t;
    t.copy_toy();
    t.write("features.csv", "1,0\n0.9,0.1\n0.2\n0,1\n");
    auto msg = load_error(t.path());
    EXPECT_NE(msg.find("features.csv:3"), std::string::npos) << msg;
}

TEST(Dataset, UnparsableNumberNamesLine) {
    TempDir t;
    t.copy_toy();
    t.write("features.csv", "1,0\n0.9,0.1\n0.2,abc\n0,1\n");
    auto msg = load_error(t.path());
    EXPECT_NE(msg.find("features.csv:3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("abc"), std::string::npos) << msg;
}

TEST(Dataset, EdgeOutOfRangeNamesLine) {
    TempDir t;
    t.copy_toy();
    t.write("edges.csv", "0,1\n1,9\n");
    auto msg = load_error(t.path());
    EXPECT_NE(msg.find("edges.csv:2"), std::string::npos) << msg;
}

TEST(Dataset, LabelProblems) {
    TempDir t;
    t.copy_toy();
    t.write("labels.csv", "0\n0\n5\n1\n");
    EXPECT_NE(load_error(t.path()).find("labels.csv:3"), std::string::npos);
    t.write("labels.csv", "0\n0\n0\n0\n");
    EXPECT_NE(load_error(t.path()).find("class 1"), std::string::npos);
    t.write("labels.csv", "0\n1\n");
    EXPECT_NE(load_error(t.path()).find("labels.csv"), std::string::npos);
}

TEST(Dataset, BadMeta) {
    TempDir t;
    t.copy_toy();
    t.write("meta.json", "{\"n_nodes\": 4");
    EXPECT_NE(load_error(t.path()).find("meta.json"), std::string::npos);
    t.write("meta.json", R"({"n_nodes": 0, "n_features": 2, "n_classes": 2, "name": "x"})");
    EXPECT_NE(load_error(t.path()).find("positive"), std::string::npos);
}

TEST(Dataset, SaveLoadRoundTripIsExact) {
    std::mt19937_64 rng(2);
    DatasetBundle d{oracle::random_graph(30, 7, 3, 0.1, rng), "rand30", "unit test"};
    TempDir t;
    save_dataset(d, t.path() / "out");
    auto back = load_dataset(t.path() / "out");
    EXPECT_EQ(back.name, "rand30");
    EXPECT_EQ(back.provenance, "unit test");
    EXPECT_EQ(back.graph.features, d.graph.features);
    EXPECT_EQ(back.graph.edges, d.graph.edges);
    EXPECT_EQ(back.graph.labels, d.graph.labels);
}

TEST(Dataset, ConvertNodeTable) {
    TempDir t;
    t.write("nodes.tsv", "node_id\tfeature\tlabel\n0\t1,0,1\t2\n1\t0,1,0\t0\n2\t1,1,0\t1\n");
    t.write("edges.tsv", "node_id\tnode_id\n0\t1\n1\t2\n2\t2\n");
    auto d = convert_node_table(t.path() / "nodes.tsv", t.path() / "edges.tsv", "tiny");
    EXPECT_EQ(d.graph.n_nodes, 3u);
    EXPECT_EQ(d.graph.n_classes, 3u);
    EXPECT_EQ(d.graph.labels, (std::vector<std::int32_t>{2, 0, 1}));
    EXPECT_EQ(d.graph.edges, (std::vector<Edge>{{0, 1}, {1, 2}}));
    EXPECT_EQ(d.graph.features(2, 1), 1.0);
}

TEST(Dataset, ConvertNodeTableErrors) {
    TempDir t;
    t.write("nodes.tsv", "node_id\tfeature\tlabel\n0\t1,0\t0\n1\t0\t1\n");
    t.write("edges.tsv", "a\tb\n0\t1\n");
    try {
        convert_node_table(t.path() / "nodes.tsv", t.path() / "edges.tsv", "bad");
        FAIL() << "expected LoadError";
    } catch (const LoadError& e) {
        EXPECT_NE(std::string(e.what()).find("nodes.tsv:3"), std::string::npos) << e.what();
    }
}

TEST(Dataset, ConvertContentCites) {
    TempDir t;
    t.write("x.content", "p10 1 0 0 Theory\np7 0 1 0 Genetic\np3 0 0 1 Theory\n");
    t.write("x.cites", "p10 p7\np3 p10\n");
    auto d = convert_content_cites(t.path() / "x.content", t.path() / "x.cites", "mini");
    EXPECT_EQ(d.graph.n_nodes, 3u);
    EXPECT_EQ(d.graph.n_classes, 2u);
    // Class ids follow sorted label names: Genetic = 0, Theory = 1.
    EXPECT_EQ(d.graph.labels, (std::vector<std::int32_t>{1, 0, 1}));
    EXPECT_EQ(d.graph.edges.size(), 2u);

    t.write("bad.cites", "p10 p99\n");
    EXPECT_THROW(convert_content_cites(t.path() / "x.content", t.path() / "bad.cites", "mini"), LoadError);
}

} // namespace
