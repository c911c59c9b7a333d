// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

// aarch64 only. vmulq/vaddq keep multiply and add separately rounded (no vfmaq).

#include "asymspec/kernels.hpp"

#include <arm_neon.h>

namespace asymspec::kernels::neon {
namespace {

void axpy(std::size_t n, double a, const double* x, double* y) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(std::size_t n, double a, const double* x, double* y) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] = a * x[i];
}

double dot(std::size_t n, const double* x, const double* y) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
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
    static const KernelTable t{"neon", axpy, scale, dot, csr_rows};
    return t;
}

} // namespace asymspec::kernels::neon
