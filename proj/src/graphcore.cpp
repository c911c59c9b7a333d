// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/graphcore.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "asymspec/error.hpp"
#include "asymspec/kernels.hpp"

namespace asymspec {

SparseMatrix::SparseMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::int64_t> row_offsets,
                           std::vector<std::int64_t> col_indices, std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
    if (row_offsets_.size() != n_rows_ + 1) throw InputError("csr: row_offsets must have n_rows + 1 entries");
    if (row_offsets_.front() != 0) throw InputError("csr: row_offsets[0] must be 0");
    if (col_indices_.size() != values_.size()) throw InputError("csr: col_indices/values length mismatch");
    if (static_cast<std::size_t>(row_offsets_.back()) != values_.size())
        throw InputError("csr: row_offsets[n_rows] must equal nnz");
    for (std::size_t r = 0; r < n_rows_; ++r) {
        if (row_offsets_[r + 1] < row_offsets_[r]) throw InputError("csr: row_offsets decreasing at row " + std::to_string(r));
        for (auto j = row_offsets_[r]; j < row_offsets_[r + 1]; ++j) {
            const auto c = col_indices_[j];
            if (c < 0 || static_cast<std::size_t>(c) >= n_cols_)
                throw InputError("csr: column index out of range in row " + std::to_string(r));
            if (j > row_offsets_[r] && col_indices_[j - 1] >= c)
                throw InputError("csr: columns not strictly increasing in row " + std::to_string(r));
        }
    }
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    std::vector<std::int64_t> offsets(n + 1), cols(n);
    for (std::size_t i = 0; i < n; ++i) {
        offsets[i + 1] = static_cast<std::int64_t>(i + 1);
        cols[i] = static_cast<std::int64_t>(i);
    }
    return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

double SparseMatrix::at(std::size_t r, std::size_t c) const noexcept {
    if (r >= n_rows_) return 0.0;
    const auto first = col_indices_.begin() + row_offsets_[r];
    const auto last = col_indices_.begin() + row_offsets_[r + 1];
    const auto it = std::lower_bound(first, last, static_cast<std::int64_t>(c));
    return (it != last && *it == static_cast<std::int64_t>(c)) ? values_[it - col_indices_.begin()] : 0.0;
}

bool SparseMatrix::structurally_symmetric() const {
    if (n_rows_ != n_cols_) return false;
    for (std::size_t r = 0; r < n_rows_; ++r) {
        for (auto j = row_offsets_[r]; j < row_offsets_[r + 1]; ++j) {
            const auto c = static_cast<std::size_t>(col_indices_[j]);
            const auto first = col_indices_.begin() + row_offsets_[c];
            const auto last = col_indices_.begin() + row_offsets_[c + 1];
            if (!std::binary_search(first, last, static_cast<std::int64_t>(r))) return false;
        }
    }
    return true;
}

Matrix SparseMatrix::to_dense() const {
    Matrix d(n_rows_, n_cols_);
    for (std::size_t r = 0; r < n_rows_; ++r)
        for (auto j = row_offsets_[r]; j < row_offsets_[r + 1]; ++j) d(r, static_cast<std::size_t>(col_indices_[j])) = values_[j];
    return d;
}

Graph Graph::make(std::size_t n_nodes, std::vector<Edge> edges, Matrix features, std::vector<std::int32_t> labels,
                  std::size_t n_classes) {
    if (features.rows() != n_nodes)
        throw InputError("graph: feature rows " + std::to_string(features.rows()) + " != n_nodes " + std::to_string(n_nodes));
    if (labels.size() != n_nodes)
        throw InputError("graph: " + std::to_string(labels.size()) + " labels for " + std::to_string(n_nodes) + " nodes");
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= n_classes)
            throw InputError("graph: label of node " + std::to_string(i) + " outside [0, n_classes)");

    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n_nodes || static_cast<std::size_t>(v) >= n_nodes)
            throw InputError("graph: edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
        if (u == v) continue;
        canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

    Graph g;
    g.n_nodes = n_nodes;
    g.edges = std::move(canon);
    g.features = std::move(features);
    g.labels = std::move(labels);
    g.n_classes = n_classes;
    return g;
}

std::vector<std::size_t> Graph::degrees() const {
    std::vector<std::size_t> deg(n_nodes, 0);
    for (auto [u, v] : edges) {
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
    }
    return deg;
}

SparseMatrix build_csr(const std::vector<Edge>& edges, std::size_t n, bool with_self_loops) {
    std::vector<std::vector<std::int64_t>> adj(n);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
            throw InputError("build_csr: edge (" + std::to_string(u) + ", " + std::to_string(v) +
                             ") out of range for n=" + std::to_string(n));
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    std::vector<std::int64_t> offsets(n + 1, 0), cols;
    for (std::size_t i = 0; i < n; ++i) {
        auto& row = adj[i];
        if (with_self_loops) row.push_back(static_cast<std::int64_t>(i));
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        cols.insert(cols.end(), row.begin(), row.end());
        offsets[i + 1] = static_cast<std::int64_t>(cols.size());
    }
    std::vector<double> values(cols.size(), 1.0);
    return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::move(values));
}

std::string_view to_string(GraphOperator op) noexcept {
    switch (op) {
        case GraphOperator::norm_laplacian: return "norm_laplacian";
        case GraphOperator::shifted_norm_laplacian: return "shifted_norm_laplacian";
        case GraphOperator::norm_adjacency: return "norm_adjacency";
        case GraphOperator::norm_adjacency_selfloop: return "norm_adjacency_selfloop";
    }
    return "unknown";
}

SparseMatrix graph_matrix(const Graph& g, GraphOperator op) {
    const std::size_t n = g.n_nodes;
    const bool self_loops = op == GraphOperator::norm_adjacency_selfloop || op == GraphOperator::norm_laplacian;
    const SparseMatrix a = build_csr(g.edges, n, self_loops);

    // Degrees of A (self-loop excluded); +1 for the self-loop variant.
    std::vector<double> inv_sqrt(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        for (auto j = a.row_offsets()[i]; j < a.row_offsets()[i + 1]; ++j)
            if (static_cast<std::size_t>(a.col_indices()[j]) != i) d += 1.0;
        if (op == GraphOperator::norm_adjacency_selfloop) d += 1.0;
        inv_sqrt[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
    }

    std::vector<double> values(a.nnz());
    for (std::size_t i = 0; i < n; ++i) {
        for (auto j = a.row_offsets()[i]; j < a.row_offsets()[i + 1]; ++j) {
            const auto c = static_cast<std::size_t>(a.col_indices()[j]);
            const double norm = inv_sqrt[i] * inv_sqrt[c];
            switch (op) {
                case GraphOperator::norm_laplacian: values[j] = (c == i) ? 1.0 : -norm; break;
                case GraphOperator::shifted_norm_laplacian: values[j] = -norm; break;
                case GraphOperator::norm_adjacency:
                case GraphOperator::norm_adjacency_selfloop: values[j] = norm; break;
            }
        }
    }
    return SparseMatrix(n, n, a.row_offsets(), a.col_indices(), std::move(values));
}

Matrix spmm(const SparseMatrix& m, const Matrix& x) {
    if (m.n_cols() != x.rows())
        throw InputError("spmm: matrix has " + std::to_string(m.n_cols()) + " columns, operand has " +
                         std::to_string(x.rows()) + " rows");
    Matrix y(m.n_rows(), x.cols());
    kernels::active().csr_rows(0, m.n_rows(), m.row_offsets().data(), m.col_indices().data(), m.values().data(),
                               x.data(), x.cols(), y.data());
    return y;
}

double edge_homophily(const Graph& g) {
    if (g.edges.empty()) throw InputError("edge_homophily: graph has no edges");
    std::size_t same = 0;
    for (auto [u, v] : g.edges)
        if (g.labels[static_cast<std::size_t>(u)] == g.labels[static_cast<std::size_t>(v)]) ++same;
    return static_cast<double>(same) / static_cast<double>(g.edges.size());
}

double spectral_radius(const SparseMatrix& m, std::size_t max_iter, double tol) {
    if (m.n_rows() == 0) return 0.0;
    Matrix v(m.n_rows(), 1);
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (auto& e : v.flat()) e = unif(rng);
    double lambda = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        const double nv = l2_norm(v.flat());
        if (nv == 0.0) return 0.0;
        for (auto& e : v.flat()) e /= nv;
        // Iterates on M^2.
        Matrix w = spmm(m, spmm(m, v));
        const double next = std::sqrt(std::abs(frobenius_dot(v, w)));
        v = std::move(w);
        if (std::abs(next - lambda) <= tol * std::max(1.0, next)) return next;
        lambda = next;
    }
    return lambda;
}

} // namespace asymspec
