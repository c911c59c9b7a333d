// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "asymspec/error.hpp"
#include "asymspec/hessian.hpp"
#include "asymspec/model.hpp"
#include "oracles.hpp"

namespace {

using namespace asymspec;

// grad = H (p - c)
GradientOracle quadratic_oracle(std::shared_ptr<const oracle::Dense> h, std::vector<double> c) {
    return [h, c](const BlockVector& p, BlockVector& g) {
        const std::size_t n = p.size();
        g = BlockVector(p.theta_size(), p.w_size());
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += (*h)[i][j] * (p.all()[j] - c[j]);
            g.all()[i] = s;
            loss += 0.5 * (p.all()[i] - c[i]) * s;
        }
        return loss;
    };
}

oracle::Dense principal(const oracle::Dense& h, std::size_t begin, std::size_t end) {
    oracle::Dense s(end - begin, std::vector<double>(end - begin));
    for (std::size_t i = begin; i < end; ++i)
        for (std::size_t j = begin; j < end; ++j) s[i - begin][j - begin] = h[i][j];
    return s;
}

TEST(Hessian, HvpOnDiagonalQuadratic) {
    auto h = std::make_shared<const oracle::Dense>(oracle::Dense{{2, 0}, {0, 3}});
    auto f = quadratic_oracle(h, {0, 0});
    BlockVector p(1, {0.3, -0.7});
    auto hv = hvp(f, p, BlockVector(1, {1.0, 1.0}));
    EXPECT_NEAR(hv.all()[0], 2.0, 1e-9);
    EXPECT_NEAR(hv.all()[1], 3.0, 1e-9);
    auto hv2 = hvp(f, p, BlockVector(1, {0.0, 5.0}));
    EXPECT_NEAR(hv2.all()[1], 15.0, 1e-8);
}

TEST(Hessian, HvpOfLinearLossIsZero) {
    GradientOracle lin = [](const BlockVector& p, BlockVector& g) {
        g = BlockVector(p.theta_size(), p.w_size(), 1.0);
        double s = 0.0;
        for (double v : p.all()) s += v;
        return s;
    };
    auto hv = hvp(lin, BlockVector(1, {1.0, 2.0}), BlockVector(1, {0.3, 0.4}));
    for (double v : hv.all()) EXPECT_EQ(v, 0.0);
}

TEST(Hessian, HvpErrors) {
    auto h = std::make_shared<const oracle::Dense>(oracle::Dense{{1}});
    auto f = quadratic_oracle(h, {0});
    EXPECT_THROW(hvp(f, BlockVector(1, std::vector<double>{1.0}), BlockVector(1, std::vector<double>{0.0})), InputError);
    EXPECT_THROW(hvp(f, BlockVector(1, std::vector<double>{1.0}), BlockVector(0, {1.0, 2.0})), InputError);
}

TEST(Hessian, HvpIsSymmetricAndLinearOnGnnLoss) {
    std::mt19937_64 rng(12);
    auto g = oracle::random_graph(15, 3, 2, 0.3, rng);
    ModelShape shape{3, 5, 2, FilterSpec{FilterFamily::chebyshev, 3}};
    auto obj = std::make_shared<GnnObjective>(shape, graph_matrix(g, shape.filter.graph_operator()),
                                              std::make_shared<const Matrix>(g.features), g.labels);
    std::vector<std::size_t> mask{0, 1, 2, 3, 4, 5, 6, 7};
    GradientOracle f = [obj, mask, shape](const BlockVector& p, BlockVector& grad) {
        return obj->loss_and_gradient(ModelParams(shape, p), mask, ForwardMode::eval(), grad);
    };
    auto p = init_params(4, shape).values();
    std::normal_distribution<double> nd;
    for (auto& t : p.theta()) t += 0.2 * nd(rng);
    for (int trial = 0; trial < 5; ++trial) {
        BlockVector u(p.theta_size(), p.w_size()), v(p.theta_size(), p.w_size());
        for (auto& x : u.all()) x = nd(rng);
        for (auto& x : v.all()) x = nd(rng);
        auto hu = hvp(f, p, u), hv = hvp(f, p, v);
        double a = 0.0, b = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            a += u.all()[i] * hv.all()[i];
            b += v.all()[i] * hu.all()[i];
            scale += std::abs(u.all()[i] * hv.all()[i]);
        }
        EXPECT_NEAR(a, b, 1e-5 * scale);

        BlockVector w(p.theta_size(), p.w_size());
        for (std::size_t i = 0; i < p.size(); ++i) w.all()[i] = 2.0 * u.all()[i] + v.all()[i];
        auto hw = hvp(f, p, w);
        double err = 0.0, nrm = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            err = std::max(err, std::abs(hw.all()[i] - 2.0 * hu.all()[i] - hv.all()[i]));
            nrm = std::max(nrm, std::abs(hw.all()[i]));
        }
        EXPECT_LT(err, 1e-5 * (1.0 + nrm));
    }
}

TEST(Hessian, RestrictToBlock) {
    BlockVector v(2, {1, 2, 3, 4});
    auto a = v;
    restrict_to_block(a, Block::theta);
    EXPECT_EQ(a, BlockVector(2, {1, 2, 0, 0}));
    auto b = a;
    restrict_to_block(b, Block::theta);
    EXPECT_EQ(a, b);
    auto c = v;
    restrict_to_block(c, Block::w);
    EXPECT_EQ(c, BlockVector(2, {0, 0, 3, 4}));
    auto d = v;
    restrict_to_block(d, Block::full);
    EXPECT_EQ(d, v);
}

TEST(Hessian, DiagonalBlockMaxima) {
    auto h = std::make_shared<const oracle::Dense>(oracle::Dense{{4, 0}, {0, 1}});
    auto f = quadratic_oracle(h, {0, 0});
    PowerOptions o{1e-10, 1000, 1};
    BlockVector p(1, {0.5, 0.5});
    EXPECT_NEAR(block_lambda_max(f, p, Block::theta, o).lambda, 4.0, 1e-8);
    EXPECT_NEAR(block_lambda_max(f, p, Block::w, o).lambda, 1.0, 1e-8);
    EXPECT_NEAR(block_lambda_max(f, p, Block::full, o).lambda, 4.0, 1e-8);
}

TEST(Hessian, PowerIterationMatchesEigensolver) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 30, nt = 8;
        std::vector<double> spec(n);
        for (auto& s : spec) s = unif(rng);
        spec[0] = 3.0;
        oracle::Dense h = oracle::random_psd(n, spec, rng);
        auto hp = std::make_shared<const oracle::Dense>(h);
        LinearOperator op = [hp, n, nt](const BlockVector& v) {
            BlockVector out(nt, n - nt);
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += (*hp)[i][j] * v.all()[j];
                out.all()[i] = s;
            }
            return out;
        };
        PowerOptions o{1e-9, 100000, static_cast<std::uint64_t>(trial)};
        const double ref_full = oracle::symmetric_eigenvalues(h).back();
        const double ref_t = oracle::symmetric_eigenvalues(principal(h, 0, nt)).back();
        const double ref_w = oracle::symmetric_eigenvalues(principal(h, nt, n)).back();
        auto full = block_lambda_max(op, nt, n - nt, Block::full, o);
        auto th = block_lambda_max(op, nt, n - nt, Block::theta, o);
        auto w = block_lambda_max(op, nt, n - nt, Block::w, o);
        EXPECT_TRUE(full.converged && th.converged && w.converged);
        EXPECT_NEAR(full.lambda, ref_full, 1e-6 * ref_full);
        EXPECT_NEAR(th.lambda, ref_t, 1e-6 * ref_t);
        EXPECT_NEAR(w.lambda, ref_w, 1e-6 * ref_w);
        EXPECT_GE(full.lambda, th.lambda * (1 - 1e-9));
        EXPECT_GE(full.lambda, w.lambda * (1 - 1e-9));
    }
}

TEST(Hessian, UnconvergedEstimateIsFlagged) {
    auto h = std::make_shared<const oracle::Dense>(oracle::Dense{{1.0, 0}, {0, 0.999999}});
    auto f = quadratic_oracle(h, {0, 0});
    auto est = block_lambda_max(f, BlockVector(0, {0.0, 0.0}), Block::full, PowerOptions{1e-14, 3, 0});
    EXPECT_FALSE(est.converged);
    EXPECT_EQ(est.iterations, 3u);
}

TEST(Hessian, BlockConditionNumber) {
    EXPECT_DOUBLE_EQ(block_condition_number(10.0, 2.0), 5.0);
    EXPECT_DOUBLE_EQ(block_condition_number(2.0, 10.0), 5.0);
    EXPECT_DOUBLE_EQ(block_condition_number(3.0, 3.0), 1.0);
    EXPECT_THROW(block_condition_number(0.0, 1.0), ParameterError);
    EXPECT_THROW(block_condition_number(1.0, -2.0), ParameterError);
}

TEST(Hessian, SpectrumReportKappa) {
    auto h = std::make_shared<const oracle::Dense>(oracle::Dense{{6, 0, 0}, {0, 2, 0}, {0, 0, 1}});
    auto f = quadratic_oracle(h, {0, 0, 0});
    auto r = spectrum_report(f, BlockVector(1, {1.0, 1.0, 1.0}), true, PowerOptions{1e-10, 2000, 0});
    ASSERT_TRUE(r.kappa_block.has_value());
    EXPECT_NEAR(*r.kappa_block, 3.0, 1e-6);
    ASSERT_TRUE(r.full.has_value());
    EXPECT_NEAR(r.full->lambda, 6.0, 1e-6);

    auto neg = std::make_shared<const oracle::Dense>(oracle::Dense{{-1, 0}, {0, 2}});
    auto r2 = spectrum_report(quadratic_oracle(neg, {0, 0}), BlockVector(1, {1.0, 1.0}), false, PowerOptions{1e-10, 100, 0});
    EXPECT_FALSE(r2.kappa_block.has_value());
    EXPECT_NEAR(r2.theta.lambda, -1.0, 1e-6);
}

// Block-diagonal quadratic with lambda_theta > lambda_W, minimizer c, checkpoint at c.
struct AuditCase {
    std::shared_ptr<const oracle::Dense> h =
        std::make_shared<const oracle::Dense>(oracle::Dense{{5, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 1}});
    std::vector<double> c{1.0, -1.0, 2.0, 0.5};
    GradientOracle f = quadratic_oracle(h, c);

    TrainResult trained() const {
        TrainResult r;
        r.best = BlockVector(2, {1.001, -1.0, 2.0, 0.5});
        for (std::size_t t = 0; t < 3; ++t) {
            DiagnosticsRecord rec;
            rec.t = t * 10;
            rec.s_theta = 1.0;
            rec.s_w = 1.0 + static_cast<double>(t);
            rec.spectrum = BlockSpectrum{5.0, 2.0, 5.0};
            r.trace.push_back(rec);
        }
        return r;
    }
};

TEST(Hessian, AuditOnConstructedCaseHasNoViolations) {
    AuditCase ac;
    auto tr = ac.trained();
    tr.trace.pop_back();
    AuditOptions o;
    o.noise_scale = 0.0;
    o.power = PowerOptions{1e-10, 5000, 3};
    auto rep = assumption_audit(tr, ac.f, o);
    EXPECT_TRUE(rep.points_equal);
    EXPECT_TRUE(rep.covary);
    EXPECT_TRUE(rep.first.bound_holds);
    EXPECT_EQ(rep.mild_scaling_violations, 0u);
    EXPECT_EQ(rep.mild_scaling.size(), 2u);
    EXPECT_TRUE(rep.ordering_holds());
    EXPECT_NEAR(rep.lambda_full, 5.0, 1e-6);
    EXPECT_NEAR(rep.lambda_theta, 5.0, 1e-6);
    EXPECT_NEAR(rep.lambda_w, 2.0, 1e-6);
}

TEST(Hessian, AuditCountsMildScalingViolations) {
    AuditCase ac;
    auto tr = ac.trained();
    // s_theta / s_W = 1/3 < lambda_W / lambda_theta = 0.4 at the last record.
    AuditOptions o;
    o.noise_scale = 0.0;
    auto rep = assumption_audit(tr, ac.f, o);
    EXPECT_EQ(rep.mild_scaling_violations, 1u);
    EXPECT_FALSE(rep.mild_scaling.back().holds);
    EXPECT_NEAR(rep.mild_scaling.back().lambda_ratio, 0.4, 1e-15);
}

TEST(Hessian, AuditIsDeterministicAndDrawsDistinctPoints) {
    AuditCase ac;
    AuditOptions o;
    o.seed = 9;
    auto a = assumption_audit(ac.trained(), ac.f, o);
    auto b = assumption_audit(ac.trained(), ac.f, o);
    EXPECT_FALSE(a.points_equal);
    EXPECT_EQ(a.first.rho, b.first.rho);
    EXPECT_EQ(a.second.lambda_max, b.second.lambda_max);
    EXPECT_EQ(a.covary, b.covary);
}

TEST(Hessian, AuditNeedsCheckpoint) {
    AuditCase ac;
    EXPECT_THROW(assumption_audit(TrainResult{}, ac.f, AuditOptions{}), InputError);
}

} // namespace
