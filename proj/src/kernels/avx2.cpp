// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 (no -mfma): products and sums stay separately rounded.

#include "asymspec/kernels.hpp"

#include <immintrin.h>

namespace asymspec::kernels::avx2 {
namespace {

void axpy(std::size_t n, double a, const double* x, double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(std::size_t n, double a, const double* x, double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = a * x[i];
}

double dot(std::size_t n, const double* x, const double* y) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    acc0 = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc0);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void csr_rows(std::size_t row_begin, std::size_t row_end, const std::int64_t* row_offsets,
              const std::int64_t* col_indices, const double* values, const double* x, std::size_t width,
              double* y) {
    for (std::size_t r = row_begin; r < row_end; ++r) {
        double* out = y + r * width;
        for (std::size_t c = 0; c < width; ++c) out[c] = 0.0;
        for (std::int64_t j = row_offsets[r]; j < row_offsets[r + 1]; ++j)
            axpy(width, values[j], x + static_cast<std::size_t>(col_indices[j]) * width, out);
    }
}

} // namespace

const KernelTable& table() noexcept {
    static const KernelTable t{"avx2", axpy, scale, dot, csr_rows};
    return t;
}

} // namespace asymspec::kernels::avx2
