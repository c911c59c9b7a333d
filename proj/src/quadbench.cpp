// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/quadbench.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "asymspec/error.hpp"
#include "asymspec/optim.hpp"

namespace asymspec {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd random_orthogonal(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = normal(rng);
    Eigen::HouseholderQR<MatrixXd> qr(g);
    MatrixXd q = qr.householderQ();
    const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < q.cols(); ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

MatrixXd to_eigen(const Matrix& m) {
    MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

Matrix from_eigen(const MatrixXd& e) {
    Matrix m(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

double max_eig(const MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

void fill_spectra(QuadraticProblem& q) {
    const MatrixXd h = to_eigen(q.h);
    const auto dt = static_cast<Eigen::Index>(q.d_theta), dw = static_cast<Eigen::Index>(q.d_w);
    q.lambda_theta = dt > 0 ? max_eig(h.topLeftCorner(dt, dt)) : 0.0;
    q.lambda_w = dw > 0 ? max_eig(h.bottomRightCorner(dw, dw)) : 0.0;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h, Eigen::EigenvaluesOnly);
    q.lambda_max = es.eigenvalues().maxCoeff();
    q.lambda_min = es.eigenvalues().minCoeff();
}

std::vector<double> prescribed_spectrum(std::size_t d, double top, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.01, 1.0);
    std::vector<double> s(d);
    s[0] = top;
    for (std::size_t i = 1; i < d; ++i) s[i] = top * unif(rng);
    return s;
}

double block_kappa(double a, double b) { return std::max(a, b) / std::min(a, b); }

} // namespace

double QuadraticProblem::loss(const BlockVector& psi) const {
    const BlockVector hd = gradient(psi);
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += (psi.all()[i] - minimizer[i]) * hd.all()[i];
    return 0.5 * s;
}

BlockVector QuadraticProblem::apply(const BlockVector& v) const {
    if (v.size() != dim()) throw InputError("quadratic: vector has wrong dimension");
    BlockVector out(d_theta, d_w);
    for (std::size_t i = 0; i < dim(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim(); ++j) s += h(i, j) * v.all()[j];
        out.all()[i] = s;
    }
    return out;
}

BlockVector QuadraticProblem::gradient(const BlockVector& psi) const {
    if (psi.size() != dim()) throw InputError("quadratic: vector has wrong dimension");
    BlockVector d(d_theta, d_w);
    for (std::size_t i = 0; i < dim(); ++i) d.all()[i] = psi.all()[i] - minimizer[i];
    return apply(d);
}

QuadraticProblem synth_quadratic(std::size_t d_theta, std::size_t d_w, double lambda_theta, double lambda_w,
                                 double coupling, std::uint64_t seed) {
    if (d_theta == 0 || d_w == 0) throw InputError("synth_quadratic: block dimensions must be positive");
    if (!(lambda_theta > 0.0) || !(lambda_w > 0.0)) throw ParameterError("synth_quadratic: block maxima must be positive");
    if (!(coupling >= 0.0 && coupling < 1.0)) throw ParameterError("synth_quadratic: coupling must lie in [0, 1)");

    std::mt19937_64 rng(seed);
    QuadraticProblem q;
    q.d_theta = d_theta;
    q.d_w = d_w;
    q.spectrum_theta = prescribed_spectrum(d_theta, lambda_theta, rng);
    q.spectrum_w = prescribed_spectrum(d_w, lambda_w, rng);

    const auto dt = static_cast<Eigen::Index>(d_theta), dw = static_cast<Eigen::Index>(d_w);
    auto conjugate = [&rng](const std::vector<double>& spec) {
        const MatrixXd o = random_orthogonal(spec.size(), rng);
        const VectorXd d = Eigen::Map<const VectorXd>(spec.data(), static_cast<Eigen::Index>(spec.size()));
        MatrixXd b = o * d.asDiagonal() * o.transpose();
        return MatrixXd((b + b.transpose()) * 0.5);
    };
    MatrixXd h = MatrixXd::Zero(dt + dw, dt + dw);
    h.topLeftCorner(dt, dt) = conjugate(q.spectrum_theta);
    h.bottomRightCorner(dw, dw) = conjugate(q.spectrum_w);

    if (coupling > 0.0) {
        std::normal_distribution<double> normal;
        MatrixXd c(dt, dw);
        for (Eigen::Index i = 0; i < dt; ++i)
            for (Eigen::Index j = 0; j < dw; ++j) c(i, j) = normal(rng);
        const double top = Eigen::JacobiSVD<MatrixXd>(c).singularValues()(0);
        c *= coupling * std::sqrt(lambda_theta * lambda_w) / top;
        h.topRightCorner(dt, dw) = c;
        h.bottomLeftCorner(dw, dt) = c.transpose();

        Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
        const VectorXd floored = es.eigenvalues().cwiseMax(0.0);
        h = es.eigenvectors() * floored.asDiagonal() * es.eigenvectors().transpose();
        h = ((h + h.transpose()) * 0.5).eval();
    }
    q.h = from_eigen(h);

    std::normal_distribution<double> normal;
    q.minimizer.resize(d_theta + d_w);
    for (auto& v : q.minimizer) v = normal(rng);
    fill_spectra(q);
    return q;
}

QuadraticProblem make_quadratic(std::size_t d_theta, Matrix h, std::vector<double> minimizer) {
    if (h.rows() != h.cols() || h.rows() != minimizer.size() || d_theta > h.rows())
        throw InputError("make_quadratic: inconsistent dimensions");
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (h(i, j) != h(j, i)) throw InputError("make_quadratic: matrix is not symmetric");
    QuadraticProblem q;
    q.d_theta = d_theta;
    q.d_w = h.rows() - d_theta;
    q.h = std::move(h);
    q.minimizer = std::move(minimizer);
    fill_spectra(q);
    return q;
}

TheoremTrial theorem_trial(const QuadraticProblem& q, const BlockVector& start, const TheoremOptions& opts) {
    if (start.size() != q.dim() || start.theta_size() != q.d_theta)
        throw InputError("theorem_trial: start does not match the problem");
    if (start == q.minimizer_vector()) throw InputError("theorem_trial: start equals the minimizer");

    OptimizerConfig cfg;
    cfg.kind = OptimizerKind::gd;
    cfg.lr_theta = opts.lr;
    cfg.lr_w = opts.lr;
    OptimizerState st(cfg, q.d_theta, q.d_w);

    const double lt = q.lambda_theta, lw = q.lambda_w;
    const double kappa = block_kappa(lt, lw);
    TheoremTrial trial;
    BlockVector psi = start;
    double prev_rho = 0.0;

    for (std::size_t t = 0; t < opts.iterations; ++t) {
        const BlockVector g = q.gradient(psi);
        TheoremRecord r;
        r.t = t;
        const double pt = psi.theta_norm(), pw = psi.w_norm();
        r.rho_theta = gpnr(g.theta_norm(), pt);
        r.rho_w = gpnr(g.w_norm(), pw);

        BlockScales s = asym_scales(pt, pw, g.theta_norm(), g.w_norm(), opts.eps_s);
        if (opts.common_scale) s = {*opts.common_scale, *opts.common_scale};
        r.s_theta = s.theta;
        r.s_w = s.w;

        r.kappa = kappa;
        const double st_l = s.theta * lt, sw_l = s.w * lw;
        r.kappa_scaled = block_kappa(st_l, sw_l);
        r.ordering = lt >= lw;
        r.proportional_gpnr = r.ordering ? r.rho_theta >= r.rho_w : r.rho_w >= r.rho_theta;
        r.mild_scaling = s.theta / s.w >= lw / lt;

        double dist = 0.0;
        for (std::size_t i = 0; i < q.dim(); ++i) {
            const double d = psi.all()[i] - q.minimizer[i];
            dist += d * d;
        }
        r.proximity = std::sqrt(dist) <= psi.norm(Block::full);
        const double rho = gpnr(g.norm(Block::full), psi.norm(Block::full));
        r.consecutive_pair_gpnr = t > 0 && prev_rho >= rho;
        prev_rho = rho;

        r.theorem_holds = r.kappa_scaled <= r.kappa;
        if (r.ordering && st_l >= sw_l) r.identity_error = std::abs(r.kappa_scaled - (s.theta / s.w) * kappa) / kappa;
        trial.records.push_back(r);

        try {
            optimizer_step(st, psi, precondition(s, g));
        } catch (const NumericError&) {
            trial.diverged = true;
            break;
        }
        if (psi.norm(Block::full) > 1e12) {
            trial.diverged = true;
            break;
        }
    }
    trial.final_point = std::move(psi);
    return trial;
}

TheoremSummary run_theorem_trials(std::size_t n_trials, std::uint64_t seed, std::size_t iterations) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> dim_theta(1, 8), dim_w(2, 24);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal;

    TheoremSummary sum;
    for (std::size_t k = 0; k < n_trials; ++k) {
        const std::size_t dt = dim_theta(rng), dw = dim_w(rng);
        const double lt = std::pow(10.0, -2.0 + 4.0 * unif(rng));
        const double lw = std::pow(10.0, -2.0 + 4.0 * unif(rng));
        const double coupling = 0.9 * unif(rng);
        const QuadraticProblem q = synth_quadratic(dt, dw, lt, lw, coupling, rng());

        BlockVector start = q.minimizer_vector();
        const double spread = std::pow(10.0, -2.0 + 2.5 * unif(rng));
        for (auto& v : start.all()) v += spread * normal(rng);

        TheoremOptions opts;
        opts.lr = std::pow(10.0, -3.0 + 2.0 * unif(rng));
        opts.iterations = iterations;
        const TheoremTrial tr = theorem_trial(q, start, opts);

        ++sum.trials;
        if (tr.diverged) ++sum.diverged_trials;
        for (const auto& r : tr.records) {
            ++sum.iterations;
            if (r.consecutive_pair_gpnr) ++sum.consecutive_pair_held;
            if (r.identity_error) {
                ++sum.identity_checks;
                sum.max_identity_error = std::max(sum.max_identity_error, *r.identity_error);
            }
            if (r.hypotheses()) {
                ++sum.hypotheses_held;
                if (r.theorem_holds) ++sum.theorem_held;
            } else if (r.proportional_gpnr && r.mild_scaling && !r.ordering && !r.theorem_holds) {
                ++sum.unordered_failures;
            }
        }
    }
    return sum;
}

double quadratic_gpnr(const QuadraticProblem& q, const BlockVector& psi) {
    return gpnr(q.gradient(psi).norm(Block::full), psi.norm(Block::full));
}

GpnrBoundReport gpnr_bound_trial(const QuadraticProblem& q, double noise_scale, std::size_t n_points,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    GpnrBoundReport rep;
    for (std::size_t k = 0; k < n_points; ++k) {
        BlockVector u(q.d_theta, q.d_w);
        for (auto& v : u.all()) v = normal(rng);
        const double un = u.norm(Block::full);
        const double r = noise_scale * unif(rng);
        BlockVector psi = q.minimizer_vector();
        double dist = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            const double step = un > 0.0 ? r * u.all()[i] / un : 0.0;
            psi.all()[i] += step;
            dist += step * step;
        }
        ++rep.points;
        if (std::sqrt(dist) > psi.norm(Block::full)) {
            ++rep.excluded;
            continue;
        }
        ++rep.proximity_valid;
        const double rho = quadratic_gpnr(q, psi);
        if (rho <= q.lambda_max) ++rep.satisfied;
        if (q.lambda_max > 0.0) rep.max_ratio = std::max(rep.max_ratio, rho / q.lambda_max);
    }
    return rep;
}

} // namespace asymspec
