// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "asymspec/graphcore.hpp"

namespace asymspec {

/// A node-classification graph with its name and a free-form provenance note.
///
/// On disk a bundle is a directory holding
///   meta.json     {"n_nodes", "n_features", "n_classes", "name"[, "provenance"]}
///   edges.csv     "u,v" per line, 0-indexed, undirected
///   features.csv  n_nodes lines of n_features comma-separated decimals
///   labels.csv    one class index per line
struct DatasetBundle {
    Graph graph;
    std::string name;
    std::string provenance;
};

/// Throws LoadError naming the file and line on any inconsistency.
DatasetBundle load_dataset(const std::filesystem::path& dir);

void save_dataset(const DatasetBundle& data, const std::filesystem::path& dir);

struct DatasetStats {
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    std::size_t n_features = 0;
    std::size_t n_classes = 0;
    std::optional<double> edge_homophily;  ///< absent for edgeless graphs
    double operator_radius = 0.0;          ///< spectral radius of -D^-1/2 A D^-1/2
};

DatasetStats dataset_stats(const DatasetBundle& data);

/// Tab-separated node/feature/label table and edge list as distributed with
/// the heterophily benchmarks (`out1_node_feature_label.txt`, `out1_graph_edges.txt`).
DatasetBundle convert_node_table(const std::filesystem::path& node_file, const std::filesystem::path& edge_file,
                                 const std::string& name);

/// Whitespace-separated `<id> <features...> <label>` content file and
/// `<id> <id>` citation list (the raw Cora layout). Labels are numbered in
/// sorted name order.
DatasetBundle convert_content_cites(const std::filesystem::path& content_file,
                                    const std::filesystem::path& cites_file, const std::string& name);

} // namespace asymspec
