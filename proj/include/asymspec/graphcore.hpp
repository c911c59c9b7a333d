// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "asymspec/dense.hpp"

namespace asymspec {

using Edge = std::pair<std::int64_t, std::int64_t>;

/// Compressed sparse row matrix in canonical form: column indices strictly
/// increasing within each row. Immutable once built.
class SparseMatrix {
public:
    SparseMatrix() = default;
    /// Validates the CSR invariants; throws InputError on violation.
    SparseMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::int64_t> row_offsets,
                 std::vector<std::int64_t> col_indices, std::vector<double> values);

    static SparseMatrix identity(std::size_t n);

    std::size_t n_rows() const noexcept { return n_rows_; }
    std::size_t n_cols() const noexcept { return n_cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    const std::vector<std::int64_t>& row_offsets() const noexcept { return row_offsets_; }
    const std::vector<std::int64_t>& col_indices() const noexcept { return col_indices_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Stored value at (r, c), or 0 when (r, c) is not in the pattern.
    double at(std::size_t r, std::size_t c) const noexcept;

    bool structurally_symmetric() const;
    Matrix to_dense() const;

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<std::int64_t> row_offsets_{0};
    std::vector<std::int64_t> col_indices_;
    std::vector<double> values_;
};

/// Undirected node-classification graph. Edges are stored once per pair with
/// u < v; self-loops in the input are dropped.
struct Graph {
    std::size_t n_nodes = 0;
    std::vector<Edge> edges;
    Matrix features;
    std::vector<std::int32_t> labels;
    std::size_t n_classes = 0;

    /// Canonicalizes the edge list and checks every invariant.
    static Graph make(std::size_t n_nodes, std::vector<Edge> edges, Matrix features, std::vector<std::int32_t> labels,
                      std::size_t n_classes);

    std::vector<std::size_t> degrees() const;
};

/// Symmetrized, deduplicated 0/1 adjacency. Either orientation (or both) may
/// appear in `edges`; self-loops are added with value 1 iff `with_self_loops`.
SparseMatrix build_csr(const std::vector<Edge>& edges, std::size_t n, bool with_self_loops);

enum class GraphOperator {
    norm_laplacian,          ///< I - D^-1/2 A D^-1/2
    shifted_norm_laplacian,  ///< -D^-1/2 A D^-1/2
    norm_adjacency,          ///< D^-1/2 A D^-1/2
    norm_adjacency_selfloop, ///< (D+I)^-1/2 (A+I) (D+I)^-1/2
};

std::string_view to_string(GraphOperator op) noexcept;

/// Degree-zero nodes get a zero D^-1/2 entry.
SparseMatrix graph_matrix(const Graph& g, GraphOperator op);

/// Exact product with per-row summation in ascending column order.
Matrix spmm(const SparseMatrix& m, const Matrix& x);

/// Fraction of undirected edges joining equally-labelled endpoints. Throws on an edgeless graph.
double edge_homophily(const Graph& g);

/// Power-iteration estimate of max |eigenvalue| for a symmetric operator.
double spectral_radius(const SparseMatrix& m, std::size_t max_iter = 500, double tol = 1e-10);

} // namespace asymspec
