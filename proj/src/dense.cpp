// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "asymspec/error.hpp"
#include "asymspec/kernels.hpp"

namespace asymspec {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols)
        throw InputError("Matrix: " + std::to_string(data_.size()) + " values for " + std::to_string(rows) + "x" +
                         std::to_string(cols));
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

// i-k-j order: each output row accumulates scaled rows of b; zero coefficients are skipped.
Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw InputError("matmul: inner dimensions " + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()));
    const auto& k = kernels::active();
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* out = c.row(i).data();
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const double coef = a(i, p);
            if (coef != 0.0) k.axpy(b.cols(), coef, b.row(p).data(), out);
        }
    }
    return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw InputError("matmul_at_b: row counts " + std::to_string(a.rows()) + " vs " + std::to_string(b.rows()));
    const auto& k = kernels::active();
    Matrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* src = b.row(i).data();
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const double coef = a(i, p);
            if (coef != 0.0) k.axpy(b.cols(), coef, src, c.row(p).data());
        }
    }
    return c;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) { return matmul(a, transpose(b)); }

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

double frobenius_dot(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("frobenius_dot: shape mismatch");
    return kernels::active().dot(a.size(), a.data(), b.data());
}

double l2_norm(std::span<const double> v) { return std::sqrt(kernels::active().dot(v.size(), v.data(), v.data())); }

} // namespace asymspec
