// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

std::vector<double> symmetric_eigenvalues(Dense a, double tol, int max_sweeps) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                total += a[i][j] * a[i][j];
                if (i != j) off += a[i][j] * a[i][j];
            }
        if (off <= tol * tol * std::max(total, 1e-300)) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

Dense to_dense(const asymspec::Matrix& m) {
    Dense d(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
    return d;
}

Dense to_dense(const asymspec::SparseMatrix& m) {
    Dense d(m.n_rows(), std::vector<double>(m.n_cols(), 0.0));
    const auto& off = m.row_offsets();
    for (std::size_t r = 0; r < m.n_rows(); ++r)
        for (auto k = off[r]; k < off[r + 1]; ++k)
            d[r][static_cast<std::size_t>(m.col_indices()[static_cast<std::size_t>(k)])] =
                m.values()[static_cast<std::size_t>(k)];
    return d;
}

Dense matmul(const Dense& a, const Dense& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Dense c(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < k; ++l) s += a[i][l] * b[l][j];
            c[i][j] = s;
        }
    return c;
}

double legendre(int k, double x) {
    if (k == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int n = 1; n < k; ++n) {
        const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double chebyshev_cos(int k, double x) { return std::cos(k * std::acos(x)); }

std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                                double h) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double fp = f(x);
        x[i] = xi - h;
        const double fm = f(x);
        x[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Dense random_psd(std::size_t n, const std::vector<double>& spectrum, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Dense q(n, std::vector<double>(n));
    for (auto& row : q)
        for (auto& v : row) v = normal(rng);
    // Modified Gram-Schmidt over columns.
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d += q[i][j] * q[i][k];
            for (std::size_t i = 0; i < n; ++i) q[i][j] -= d * q[i][k];
        }
        double nn = 0.0;
        for (std::size_t i = 0; i < n; ++i) nn += q[i][j] * q[i][j];
        nn = std::sqrt(nn);
        for (std::size_t i = 0; i < n; ++i) q[i][j] /= nn;
    }
    Dense a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += q[i][k] * spectrum[k] * q[j][k];
            a[i][j] = a[j][i] = s;
        }
    return a;
}

asymspec::Graph random_graph(std::size_t n, std::size_t d, std::size_t classes, double p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<asymspec::Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (unif(rng) < p) edges.emplace_back(i, j);
    for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    asymspec::Matrix x(n, d);
    std::normal_distribution<double> normal;
    for (auto& v : x.flat()) v = normal(rng);
    std::vector<std::int32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::int32_t>(i % classes);
    std::shuffle(labels.begin(), labels.end(), rng);
    return asymspec::Graph::make(n, std::move(edges), std::move(x), std::move(labels), classes);
}

double max_abs_diff(const Dense& a, const Dense& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
    return m;
}

} // namespace oracle
