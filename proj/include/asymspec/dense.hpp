// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace asymspec {

/// Row-major dense matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<double> flat() noexcept { return data_; }
    std::span<const double> flat() const noexcept { return data_; }
    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    void fill(double v);
    bool all_finite() const noexcept;

    static Matrix identity(std::size_t n);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Dense products used by the MLP. All route through the dispatched kernels.

/// a (m x k) * b (k x n)
Matrix matmul(const Matrix& a, const Matrix& b);
/// a^T (k x m)^T * b (k x n) -> m x n
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
/// a (m x k) * b^T (n x k)^T -> m x n
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

double frobenius_dot(const Matrix& a, const Matrix& b);
double l2_norm(std::span<const double> v);

} // namespace asymspec
