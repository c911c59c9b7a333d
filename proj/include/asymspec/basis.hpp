// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "asymspec/dense.hpp"
#include "asymspec/graphcore.hpp"

namespace asymspec {

enum class FilterFamily { chebyshev, chebyshev_ii, jacobi, monomial, bernstein };

std::string_view to_string(FilterFamily f) noexcept;
/// Accepts the family names above plus the model aliases chebnet, chebnetii, jacobiconv, gprgnn, bernnet.
FilterFamily parse_filter_family(std::string_view name);

struct FilterSpec {
    FilterFamily family = FilterFamily::chebyshev;
    std::size_t order = 10;  ///< K; the filter has K + 1 coefficients.
    double jacobi_a = 1.0;
    double jacobi_b = 1.0;

    std::size_t n_coeffs() const noexcept { return order + 1; }
    /// Graph operator each family expands in.
    GraphOperator graph_operator() const noexcept;
    /// Throws ParameterError for Jacobi parameters at or below -1.
    void validate() const;
};

/// Result of applying g_theta(M) to H.
///
/// `basis[k]` holds the k-th basis block applied to H, already carrying any
/// fixed per-term constant (the Bernstein binomial weight), so that
/// `output == sum_k coeffs[k] * basis[k]` with the accumulation done in
/// ascending k. For chebyshev_ii `coeffs` are the effective Chebyshev
/// coefficients; for every other family they are theta itself.
struct FilterResult {
    Matrix output;
    std::vector<Matrix> basis;
    std::vector<double> coeffs;
};

FilterResult apply_filter(const FilterSpec& spec, std::span<const double> theta, const SparseMatrix& m, const Matrix& h);

struct JacobiCoeffs {
    double gamma;        ///< multiplies M P_{k-1}
    double gamma_prime;  ///< multiplies P_{k-1}
    double gamma_second; ///< multiplies P_{k-2}; carries its (negative) sign
};

/// Three-term Jacobi recursion constants for k >= 2:
///   P_k = gamma * M P_{k-1} + gamma' * P_{k-1} + gamma'' * P_{k-2}
/// with gamma'' = -(k+a-1)(k+b-1)(2k+a+b) / (k (k+a+b) (2k+a+b-2)).
/// The negative sign and the (k+a-1) factor are what make a = b = 0 reproduce
/// the Legendre polynomials.
JacobiCoeffs jacobi_recursion_coeffs(double a, double b, std::size_t k);

/// Constant and linear coefficients of P_1 = c0 + c1 x, i.e. (a-b)/2 and (a+b+2)/2.
std::pair<double, double> jacobi_first_coeffs(double a, double b);

/// x_j = cos((j + 1/2) pi / (K + 1)), j = 0..K.
std::vector<double> chebyshev_nodes(std::size_t order);

/// c_k = 2/(K+2) * sum_j theta_j T_k(x_j). The k = 0 term is not halved.
std::vector<double> chebii_effective_coeffs(std::span<const double> theta, std::size_t order);

/// Adjoint of chebii_effective_coeffs: maps dL/dc to dL/dtheta.
std::vector<double> chebii_theta_gradient(std::span<const double> grad_effective, std::size_t order);

/// The scalar polynomial g_theta(x) for one of the families (tests and plots).
double filter_response(const FilterSpec& spec, std::span<const double> theta, double x);

} // namespace asymspec
