// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "asymspec/error.hpp"
#include "asymspec/kernels.hpp"

namespace asymspec {

std::string_view to_string(FilterFamily f) noexcept {
    switch (f) {
        case FilterFamily::chebyshev: return "chebyshev";
        case FilterFamily::chebyshev_ii: return "chebyshev_ii";
        case FilterFamily::jacobi: return "jacobi";
        case FilterFamily::monomial: return "monomial";
        case FilterFamily::bernstein: return "bernstein";
    }
    return "unknown";
}

FilterFamily parse_filter_family(std::string_view name) {
    if (name == "chebyshev" || name == "chebnet") return FilterFamily::chebyshev;
    if (name == "chebyshev_ii" || name == "chebnetii") return FilterFamily::chebyshev_ii;
    if (name == "jacobi" || name == "jacobiconv") return FilterFamily::jacobi;
    if (name == "monomial" || name == "gprgnn") return FilterFamily::monomial;
    if (name == "bernstein" || name == "bernnet") return FilterFamily::bernstein;
    throw InputError("unknown filter family '" + std::string(name) + "'");
}

GraphOperator FilterSpec::graph_operator() const noexcept {
    switch (family) {
        case FilterFamily::chebyshev:
        case FilterFamily::chebyshev_ii: return GraphOperator::shifted_norm_laplacian;
        case FilterFamily::jacobi: return GraphOperator::norm_adjacency;
        case FilterFamily::monomial: return GraphOperator::norm_adjacency_selfloop;
        case FilterFamily::bernstein: return GraphOperator::norm_laplacian;
    }
    return GraphOperator::norm_adjacency;
}

void FilterSpec::validate() const {
    if (family == FilterFamily::jacobi && (jacobi_a <= -1.0 || jacobi_b <= -1.0))
        throw ParameterError("jacobi: a and b must exceed -1");
}

std::pair<double, double> jacobi_first_coeffs(double a, double b) { return {(a - b) / 2.0, (a + b + 2.0) / 2.0}; }

JacobiCoeffs jacobi_recursion_coeffs(double a, double b, std::size_t k) {
    if (k < 2) throw ParameterError("jacobi_recursion_coeffs: k must be >= 2");
    const double kd = static_cast<double>(k);
    const double s = 2.0 * kd + a + b;
    const double denom_a = 2.0 * kd * (kd + a + b);
    const double denom_b = s - 2.0;
    if (denom_a == 0.0 || denom_b == 0.0 || kd + a + b == 0.0)
        throw ParameterError("jacobi_recursion_coeffs: zero denominator at k=" + std::to_string(k));
    JacobiCoeffs c{};
    c.gamma = s * (s - 1.0) / denom_a;
    c.gamma_prime = (s - 1.0) * (a * a - b * b) / (denom_a * denom_b);
    c.gamma_second = -((kd + a - 1.0) * (kd + b - 1.0) * s) / (kd * (kd + a + b) * denom_b);
    return c;
}

std::vector<double> chebyshev_nodes(std::size_t order) {
    std::vector<double> x(order + 1);
    for (std::size_t j = 0; j <= order; ++j)
        x[j] = std::cos((static_cast<double>(j) + 0.5) * std::numbers::pi / static_cast<double>(order + 1));
    return x;
}

namespace {

// T_k(x) for k = 0..order.
std::vector<double> chebyshev_values(double x, std::size_t order) {
    std::vector<double> t(order + 1);
    t[0] = 1.0;
    if (order >= 1) t[1] = x;
    for (std::size_t k = 2; k <= order; ++k) t[k] = 2.0 * x * t[k - 1] - t[k - 2];
    return t;
}

void check_len(std::span<const double> v, std::size_t order, const char* what) {
    if (v.size() != order + 1)
        throw InputError(std::string(what) + ": expected " + std::to_string(order + 1) + " coefficients, got " +
                         std::to_string(v.size()));
}

} // namespace

std::vector<double> chebii_effective_coeffs(std::span<const double> theta, std::size_t order) {
    check_len(theta, order, "chebii_effective_coeffs");
    const auto nodes = chebyshev_nodes(order);
    const double w = 2.0 / static_cast<double>(order + 2);
    std::vector<double> c(order + 1, 0.0);
    for (std::size_t j = 0; j <= order; ++j) {
        const auto t = chebyshev_values(nodes[j], order);
        for (std::size_t k = 0; k <= order; ++k) c[k] += theta[j] * t[k];
    }
    for (auto& v : c) v *= w;
    return c;
}

std::vector<double> chebii_theta_gradient(std::span<const double> grad_effective, std::size_t order) {
    check_len(grad_effective, order, "chebii_theta_gradient");
    const auto nodes = chebyshev_nodes(order);
    const double w = 2.0 / static_cast<double>(order + 2);
    std::vector<double> g(order + 1, 0.0);
    for (std::size_t j = 0; j <= order; ++j) {
        const auto t = chebyshev_values(nodes[j], order);
        double s = 0.0;
        for (std::size_t k = 0; k <= order; ++k) s += t[k] * grad_effective[k];
        g[j] = w * s;
    }
    return g;
}

namespace {

// out = alpha * a + beta * b, elementwise.
Matrix combine(double alpha, const Matrix& a, double beta, const Matrix& b) {
    Matrix out(a.rows(), a.cols());
    const auto& k = kernels::active();
    k.scale(out.size(), alpha, a.data(), out.data());
    k.axpy(out.size(), beta, b.data(), out.data());
    return out;
}

std::vector<Matrix> chebyshev_basis(const SparseMatrix& m, const Matrix& h, std::size_t order) {
    std::vector<Matrix> basis;
    basis.reserve(order + 1);
    basis.push_back(h);
    if (order >= 1) basis.push_back(spmm(m, h));
    for (std::size_t k = 2; k <= order; ++k) basis.push_back(combine(2.0, spmm(m, basis[k - 1]), -1.0, basis[k - 2]));
    return basis;
}

std::vector<Matrix> jacobi_basis(const SparseMatrix& m, const Matrix& h, std::size_t order, double a, double b) {
    std::vector<Matrix> basis;
    basis.reserve(order + 1);
    basis.push_back(h);
    if (order >= 1) {
        const auto [c0, c1] = jacobi_first_coeffs(a, b);
        basis.push_back(combine(c1, spmm(m, h), c0, h));
    }
    for (std::size_t k = 2; k <= order; ++k) {
        const auto c = jacobi_recursion_coeffs(a, b, k);
        Matrix next = combine(c.gamma, spmm(m, basis[k - 1]), c.gamma_prime, basis[k - 1]);
        kernels::active().axpy(next.size(), c.gamma_second, basis[k - 2].data(), next.data());
        basis.push_back(std::move(next));
    }
    return basis;
}

std::vector<Matrix> monomial_basis(const SparseMatrix& m, const Matrix& h, std::size_t order) {
    std::vector<Matrix> basis;
    basis.reserve(order + 1);
    basis.push_back(h);
    for (std::size_t k = 1; k <= order; ++k) basis.push_back(spmm(m, basis[k - 1]));
    return basis;
}

// Term k: C(K,k) / 2^K * (2I - L)^{K-k} L^k h.
std::vector<Matrix> bernstein_basis(const SparseMatrix& lap, const Matrix& h, std::size_t order) {
    std::vector<Matrix> powers = monomial_basis(lap, h, order);
    std::vector<Matrix> basis;
    basis.reserve(order + 1);
    double binom = 1.0;  // C(K, k)
    const double inv = std::ldexp(1.0, -static_cast<int>(order));
    for (std::size_t k = 0; k <= order; ++k) {
        Matrix t = std::move(powers[k]);
        for (std::size_t r = 0; r < order - k; ++r) t = combine(2.0, t, -1.0, spmm(lap, t));
        Matrix scaled(t.rows(), t.cols());
        kernels::active().scale(t.size(), binom * inv, t.data(), scaled.data());
        basis.push_back(std::move(scaled));
        binom = binom * static_cast<double>(order - k) / static_cast<double>(k + 1);
    }
    return basis;
}

} // namespace

FilterResult apply_filter(const FilterSpec& spec, std::span<const double> theta, const SparseMatrix& m, const Matrix& h) {
    spec.validate();
    check_len(theta, spec.order, "apply_filter");
    if (m.n_rows() != m.n_cols()) throw InputError("apply_filter: graph matrix must be square");
    if (m.n_cols() != h.rows())
        throw InputError("apply_filter: graph matrix is " + std::to_string(m.n_rows()) + "x" + std::to_string(m.n_cols()) +
                         " but features have " + std::to_string(h.rows()) + " rows");

    FilterResult r;
    switch (spec.family) {
        case FilterFamily::chebyshev:
            r.basis = chebyshev_basis(m, h, spec.order);
            r.coeffs.assign(theta.begin(), theta.end());
            break;
        case FilterFamily::chebyshev_ii:
            r.basis = chebyshev_basis(m, h, spec.order);
            r.coeffs = chebii_effective_coeffs(theta, spec.order);
            break;
        case FilterFamily::jacobi:
            r.basis = jacobi_basis(m, h, spec.order, spec.jacobi_a, spec.jacobi_b);
            r.coeffs.assign(theta.begin(), theta.end());
            break;
        case FilterFamily::monomial:
            r.basis = monomial_basis(m, h, spec.order);
            r.coeffs.assign(theta.begin(), theta.end());
            break;
        case FilterFamily::bernstein:
            r.basis = bernstein_basis(m, h, spec.order);
            r.coeffs.assign(theta.begin(), theta.end());
            break;
    }

    r.output = Matrix(h.rows(), h.cols());
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < r.basis.size(); ++i) k.axpy(r.output.size(), r.coeffs[i], r.basis[i].data(), r.output.data());
    if (!r.output.all_finite())
        throw NumericError(std::string("apply_filter: non-finite output for ") + std::string(to_string(spec.family)) +
                           " filter of order " + std::to_string(spec.order));
    return r;
}

double filter_response(const FilterSpec& spec, std::span<const double> theta, double x) {
    const SparseMatrix m(1, 1, {0, 1}, {0}, {x});
    const Matrix h(1, 1, 1.0);
    return apply_filter(spec, theta, m, h).output(0, 0);
}

} // namespace asymspec
