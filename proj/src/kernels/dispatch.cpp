// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace asymspec::kernels {

#if defined(ASYMSPEC_HAVE_AVX2)
namespace avx2 { const KernelTable& table() noexcept; }
#endif
#if defined(ASYMSPEC_HAVE_NEON)
namespace neon { const KernelTable& table() noexcept; }
#endif

const KernelTable* avx2_table() noexcept {
#if defined(ASYMSPEC_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2")) return &avx2::table();
#endif
    return nullptr;
}

const KernelTable* neon_table() noexcept {
#if defined(ASYMSPEC_HAVE_NEON)
    return &neon::table();
#else
    return nullptr;
#endif
}

namespace {

const KernelTable* pick() noexcept {
    if (const char* env = std::getenv("ASYMSPEC_SIMD"); env && std::string_view(env) == "scalar")
        return &scalar_table();
    if (const KernelTable* t = avx2_table()) return t;
    if (const KernelTable* t = neon_table()) return t;
    return &scalar_table();
}

std::atomic<const KernelTable*>& slot() noexcept {
    static std::atomic<const KernelTable*> current{pick()};
    return current;
}

} // namespace

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

void set_active(const KernelTable& table) noexcept { slot().store(&table, std::memory_order_release); }

} // namespace asymspec::kernels
