// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdio>
#include <string>

namespace acceptance {

enum class Status { pass, fail, skip, blocked };

/// One line per criterion. `blocked` marks a reading that cannot hold and is reported without gating.
class Ledger {
public:
    void record(const std::string& id, const std::string& title, Status s, const std::string& detail) {
        const char* tag = s == Status::pass ? "PASS" : s == Status::fail ? "FAIL" : s == Status::skip ? "SKIP" : "BLOCKED";
        std::printf("[%-7s] %-4s %s: %s\n", tag, id.c_str(), title.c_str(), detail.c_str());
        std::fflush(stdout);
        if (s == Status::fail) ++failed_;
        if (s == Status::skip) ++skipped_;
    }
    void record(const std::string& id, const std::string& title, bool ok, const std::string& detail) {
        record(id, title, ok ? Status::pass : Status::fail, detail);
    }

    /// 1 on any failure, 77 when something was skipped, 0 otherwise.
    int exit_code() const { return failed_ ? 1 : skipped_ ? 77 : 0; }

private:
    int failed_ = 0;
    int skipped_ = 0;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace acceptance
