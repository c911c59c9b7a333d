// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace asymspec {

inline constexpr const char* kVersion = "0.1.0";

} // namespace asymspec
