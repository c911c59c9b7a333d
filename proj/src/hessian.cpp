// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "asymspec/dense.hpp"
#include "asymspec/error.hpp"

namespace asymspec {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

BlockVector hvp(const GradientOracle& oracle, const BlockVector& p, const BlockVector& v, double rel_eps) {
    if (!p.same_shape(v)) throw InputError("hvp: direction does not match parameter shape");
    const double vn = l2_norm(v.all());
    if (!(vn > 0.0)) throw InputError("hvp: direction must be nonzero");
    const double eps = rel_eps * (1.0 + l2_norm(p.all()));

    BlockVector plus = p, minus = p;
    auto vp = v.all();
    for (std::size_t i = 0; i < vp.size(); ++i) {
        plus.all()[i] += eps * (vp[i] / vn);
        minus.all()[i] -= eps * (vp[i] / vn);
    }
    BlockVector gp(p.theta_size(), p.w_size()), gm(p.theta_size(), p.w_size());
    oracle(plus, gp);
    oracle(minus, gm);

    BlockVector out(p.theta_size(), p.w_size());
    const double c = vn / (2.0 * eps);
    for (std::size_t i = 0; i < out.size(); ++i) out.all()[i] = (gp.all()[i] - gm.all()[i]) * c;
    if (!out.all_finite()) throw NumericError("hvp: non-finite result");
    return out;
}

void restrict_to_block(BlockVector& v, Block b) noexcept {
    if (b == Block::theta) std::fill(v.w().begin(), v.w().end(), 0.0);
    if (b == Block::w) std::fill(v.theta().begin(), v.theta().end(), 0.0);
}

EigenEstimate block_lambda_max(const LinearOperator& op, std::size_t theta_size, std::size_t w_size, Block b,
                               const PowerOptions& opts) {
    if (!(opts.tol > 0.0)) throw ParameterError("power iteration tolerance must be positive");
    BlockVector v(theta_size, w_size);
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    for (auto& x : v.block(b)) x = normal(rng);
    double n = l2_norm(v.all());
    if (n == 0.0) return {};
    for (auto& x : v.all()) x /= n;

    EigenEstimate est;
    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        BlockVector hv = op(v);
        restrict_to_block(hv, b);
        const double lambda = dot(v.all(), hv.all());
        const double hn = l2_norm(hv.all());
        est.iterations = it;
        est.lambda = lambda;
        if (hn == 0.0) {
            est.residual = 0.0;
            est.converged = true;
            return est;
        }
        double r = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double d = hv.all()[i] - lambda * v.all()[i];
            r += d * d;
        }
        est.residual = lambda != 0.0 ? std::sqrt(r) / std::abs(lambda) : std::numeric_limits<double>::infinity();
        if (est.residual < opts.tol) {
            est.converged = true;
            return est;
        }
        for (std::size_t i = 0; i < v.size(); ++i) v.all()[i] = hv.all()[i] / hn;
    }
    return est;
}

EigenEstimate block_lambda_max(const GradientOracle& oracle, const BlockVector& p, Block b, const PowerOptions& opts,
                               double rel_eps) {
    const LinearOperator op = [&](const BlockVector& v) { return hvp(oracle, p, v, rel_eps); };
    return block_lambda_max(op, p.theta_size(), p.w_size(), b, opts);
}

double block_condition_number(double lambda_theta, double lambda_w) {
    if (!(lambda_theta > 0.0) || !(lambda_w > 0.0))
        throw ParameterError("block condition number needs positive block maxima");
    return std::max(lambda_theta, lambda_w) / std::min(lambda_theta, lambda_w);
}

SpectrumReport spectrum_report(const GradientOracle& oracle, const BlockVector& p, bool include_full,
                               const PowerOptions& opts, double rel_eps) {
    SpectrumReport r;
    r.theta = block_lambda_max(oracle, p, Block::theta, opts, rel_eps);
    r.w = block_lambda_max(oracle, p, Block::w, opts, rel_eps);
    if (include_full) r.full = block_lambda_max(oracle, p, Block::full, opts, rel_eps);
    if (r.theta.lambda > 0.0 && r.w.lambda > 0.0) r.kappa_block = block_condition_number(r.theta.lambda, r.w.lambda);
    return r;
}

SpectrumFn make_spectrum_fn(GradientOracle oracle, PowerOptions opts, bool include_full, double rel_eps) {
    return [oracle = std::move(oracle), opts, include_full, rel_eps](const BlockVector& p) {
        const SpectrumReport r = spectrum_report(oracle, p, include_full, opts, rel_eps);
        BlockSpectrum s;
        s.lambda_theta = r.theta.lambda;
        s.lambda_w = r.w.lambda;
        if (r.full) s.lambda_full = r.full->lambda;
        return s;
    };
}

AuditReport assumption_audit(const TrainResult& trained, const GradientOracle& oracle, const AuditOptions& opts) {
    if (trained.best.size() == 0) throw InputError("assumption_audit: no best checkpoint");
    const BlockVector& best = trained.best;
    AuditReport rep;

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    auto probe = [&](std::uint64_t power_seed) {
        BlockVector q = best;
        for (auto& x : q.all()) x += opts.noise_scale * normal(rng);
        BlockVector g(q.theta_size(), q.w_size());
        oracle(q, g);
        ProbePoint pt;
        pt.rho = gpnr(l2_norm(g.all()), l2_norm(q.all()));
        PowerOptions po = opts.power;
        po.seed = power_seed;
        pt.lambda_max = block_lambda_max(oracle, q, Block::full, po, opts.rel_eps).lambda;
        pt.bound_holds = pt.rho <= pt.lambda_max;
        return std::pair{pt, q};
    };
    auto [p1, q1] = probe(opts.power.seed);
    auto [p2, q2] = probe(opts.power.seed);
    rep.first = p1;
    rep.second = p2;
    rep.points_equal = q1 == q2;
    rep.covary = p1.lambda_max >= p2.lambda_max ? p1.rho >= p2.rho : p2.rho >= p1.rho;

    for (const auto& rec : trained.trace) {
        if (!rec.spectrum) continue;
        MildScalingCheck c;
        c.t = rec.t;
        c.scale_ratio = rec.s_theta / rec.s_w;
        c.lambda_ratio = rec.spectrum->lambda_w / rec.spectrum->lambda_theta;
        c.holds = c.scale_ratio >= c.lambda_ratio;
        if (!c.holds) ++rep.mild_scaling_violations;
        rep.mild_scaling.push_back(c);
    }

    rep.lambda_full = block_lambda_max(oracle, best, Block::full, opts.power, opts.rel_eps).lambda;
    rep.lambda_theta = block_lambda_max(oracle, best, Block::theta, opts.power, opts.rel_eps).lambda;
    rep.lambda_w = block_lambda_max(oracle, best, Block::w, opts.power, opts.rel_eps).lambda;
    rep.full_ge_theta = rep.lambda_full >= rep.lambda_theta;
    rep.theta_ge_w = rep.lambda_theta >= rep.lambda_w;
    return rep;
}

} // namespace asymspec
