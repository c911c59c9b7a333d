// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace asymspec::kernels {

/// Inner loops shared by the sparse and dense products.
///
/// Every variant vectorizes across the contiguous output dimension, so each
/// output element sees the same sequence of multiplies and adds as the scalar
/// reference. Variants are therefore bitwise interchangeable for axpy, scale,
/// and csr_rows. `dot` reduces in lanes and is only equal up to rounding.
struct KernelTable {
    std::string_view name;

    /// y[i] += a * x[i]
    void (*axpy)(std::size_t n, double a, const double* x, double* y);
    /// y[i] = a * x[i]
    void (*scale)(std::size_t n, double a, const double* x, double* y);
    /// sum x[i] * y[i]
    double (*dot)(std::size_t n, const double* x, const double* y);

    /// Y[r, :] = sum_j values[j] * X[col[j], :] for rows [row_begin, row_end),
    /// j ascending. X and Y are row-major with `width` columns.
    void (*csr_rows)(std::size_t row_begin, std::size_t row_end, const std::int64_t* row_offsets,
                     const std::int64_t* col_indices, const double* values, const double* x,
                     std::size_t width, double* y);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

/// Table picked at first use: best supported variant, unless ASYMSPEC_SIMD=scalar.
const KernelTable& active() noexcept;

/// Override the active table (tests and benchmarks).
void set_active(const KernelTable& table) noexcept;

} // namespace asymspec::kernels
