// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/kernels.hpp"

namespace asymspec::kernels {
namespace {

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

double dot_scalar(std::size_t n, const double* x, const double* y) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void csr_rows_scalar(std::size_t row_begin, std::size_t row_end, const std::int64_t* row_offsets,
                     const std::int64_t* col_indices, const double* values, const double* x,
                     std::size_t width, double* y) {
    for (std::size_t r = row_begin; r < row_end; ++r) {
        double* out = y + r * width;
        for (std::size_t c = 0; c < width; ++c) out[c] = 0.0;
        for (std::int64_t j = row_offsets[r]; j < row_offsets[r + 1]; ++j) {
            const double v = values[j];
            const double* in = x + static_cast<std::size_t>(col_indices[j]) * width;
            for (std::size_t c = 0; c < width; ++c) out[c] += v * in[c];
        }
    }
}

} // namespace

const KernelTable& scalar_table() noexcept {
    static const KernelTable table{"scalar", axpy_scalar, scale_scalar, dot_scalar, csr_rows_scalar};
    return table;
}

} // namespace asymspec::kernels
