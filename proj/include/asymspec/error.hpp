// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace asymspec {

/// Caller supplied malformed input (shape mismatch, out-of-range index, empty mask).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hyperparameters outside the domain where a formula is defined.
class ParameterError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Dataset bundle could not be read. The message carries file and line.
class LoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace asymspec
