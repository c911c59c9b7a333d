// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "asymspec/error.hpp"

namespace asymspec {

std::string_view to_string(OptimizerKind k) noexcept { return k == OptimizerKind::gd ? "gd" : "adam"; }

OptimizerKind parse_optimizer_kind(std::string_view name) {
    if (name == "gd" || name == "sgd") return OptimizerKind::gd;
    if (name == "adam") return OptimizerKind::adam;
    throw ConfigError("unknown optimizer '" + std::string(name) + "'");
}

void OptimizerConfig::validate() const {
    auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!finite_nonneg(lr_theta) || !finite_nonneg(lr_w)) throw ConfigError("learning rates must be finite and >= 0");
    if (!finite_nonneg(weight_decay_theta) || !finite_nonneg(weight_decay_w))
        throw ConfigError("weight decay must be finite and >= 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
        throw ConfigError("Adam betas must lie in [0, 1)");
    if (!(eps > 0.0)) throw ConfigError("Adam eps must be positive");
}

OptimizerState::OptimizerState(const OptimizerConfig& cfg, std::size_t theta_size, std::size_t w_size) : cfg_(cfg) {
    cfg_.validate();
    if (cfg_.kind == OptimizerKind::adam) {
        m_ = BlockVector(theta_size, w_size);
        v_ = BlockVector(theta_size, w_size);
    }
}

BlockVector OptimizerState::direction(const BlockVector& g) {
    ++step_;
    if (cfg_.kind == OptimizerKind::gd) return g;
    if (!m_.same_shape(g)) throw InputError("optimizer state does not match gradient shape");

    const double b1 = cfg_.beta1, b2 = cfg_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
    BlockVector d(g.theta_size(), g.w_size());
    auto gm = g.all();
    auto m = m_.all();
    auto v = v_.all();
    auto out = d.all();
    for (std::size_t i = 0; i < gm.size(); ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * gm[i];
        v[i] = b2 * v[i] + (1.0 - b2) * gm[i] * gm[i];
        out[i] = (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg_.eps);
    }
    return d;
}

void apply_update(const OptimizerConfig& cfg, BlockVector& p, const BlockVector& delta) {
    if (!p.same_shape(delta)) throw InputError("update does not match parameter shape");
    auto step = [](std::span<double> x, std::span<const double> d, double lr, double wd) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= lr * (d[i] + wd * x[i]);
    };
    step(p.theta(), delta.theta(), cfg.lr_theta, cfg.weight_decay_theta);
    step(p.w(), delta.w(), cfg.lr_w, cfg.weight_decay_w);
    if (!p.all_finite()) throw NumericError("optimizer step produced non-finite parameters");
}

BlockVector optimizer_step(OptimizerState& st, BlockVector& p, const BlockVector& g) {
    BlockVector d = st.direction(g);
    if (!d.all_finite()) throw NumericError("optimizer produced a non-finite update direction");
    apply_update(st.config(), p, d);
    return d;
}

double gpnr(double grad_block_norm, double param_block_norm) noexcept {
    if (param_block_norm > 0.0) return grad_block_norm / param_block_norm;
    return grad_block_norm == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double ema_norm_update(double pi_prev, double beta, double current_norm) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ParameterError("EMA smoothing factor must lie in [0, 1]");
    return beta * pi_prev + (1.0 - beta) * current_norm;
}

BlockScales asym_scales(double pi_theta, double pi_w, double delta_theta_norm, double delta_w_norm, double eps_s) {
    return {std::abs(pi_theta) / (delta_theta_norm + eps_s), std::abs(pi_w) / (delta_w_norm + eps_s)};
}

BlockVector precondition(const BlockScales& s, const BlockVector& g) {
    BlockVector out = g;
    for (auto& v : out.theta()) v *= s.theta;
    for (auto& v : out.w()) v *= s.w;
    return out;
}

TrainResult asymmetric_train(const TrainConfig& cfg, BlockVector init, const GradientFn& gradient,
                             const ValidationFn& validation, const SpectrumFn& spectrum) {
    if (cfg.t_max < 1) throw ConfigError("t_max must be at least 1");
    if (!gradient || !validation) throw InputError("asymmetric_train: missing gradient or validation callback");

    TrainResult res;
    BlockVector p = std::move(init);
    OptimizerState opt(cfg.optimizer, p.theta_size(), p.w_size());
    PreconditionerState pre;
    pre.beta_theta = cfg.beta_theta;
    pre.beta_w = cfg.beta_w;
    pre.eps_s = cfg.eps_s;
    pre.pi_theta = p.theta_norm();
    pre.pi_w = p.w_norm();

    double best = std::numeric_limits<double>::infinity();
    res.best = p;
    BlockVector grad(p.theta_size(), p.w_size());

    try {
        for (std::size_t t = 0; t <= cfg.t_max; ++t) {
            DiagnosticsRecord rec;
            rec.t = t;
            rec.train_loss = gradient(p, t, grad);
            if (!std::isfinite(rec.train_loss) || !grad.all_finite())
                throw NumericError("non-finite loss or gradient at iteration " + std::to_string(t));

            const double p_theta = p.theta_norm(), p_w = p.w_norm();
            const double g_theta = grad.theta_norm(), g_w = grad.w_norm();
            rec.rho_theta = gpnr(g_theta, p_theta);
            rec.rho_w = gpnr(g_w, p_w);

            BlockScales s;
            if (cfg.precondition || cfg.always_probe) {
                OptimizerState probe = opt;
                const BlockVector delta = probe.direction(grad);
                pre.pi_theta = ema_norm_update(pre.pi_theta, pre.beta_theta, p_theta);
                pre.pi_w = ema_norm_update(pre.pi_w, pre.beta_w, p_w);
                s = asym_scales(pre.pi_theta, pre.pi_w, delta.theta_norm(), delta.w_norm(), pre.eps_s);
                if (cfg.scale_clamp) {
                    s.theta = std::clamp(s.theta, cfg.scale_clamp->first, cfg.scale_clamp->second);
                    s.w = std::clamp(s.w, cfg.scale_clamp->first, cfg.scale_clamp->second);
                }
                pre.scales = s;
            }
            rec.s_theta = s.theta;
            rec.s_w = s.w;
            rec.pi_theta = pre.pi_theta;
            rec.pi_w = pre.pi_w;

            rec.val_loss = validation(p);
            if (!std::isfinite(rec.val_loss))
                throw NumericError("non-finite validation loss at iteration " + std::to_string(t));
            if (rec.val_loss <= best) {
                best = rec.val_loss;
                res.best = p;
                res.best_iteration = t;
            }

            if (spectrum && cfg.spectrum_interval > 0 && t % cfg.spectrum_interval == 0) {
                rec.spectrum = spectrum(p);
                const double a = rec.spectrum->lambda_theta, b = rec.spectrum->lambda_w;
                if (a > 0.0 && b > 0.0) rec.kappa_block = std::max(a, b) / std::min(a, b);
            }

            if (cfg.precondition) {
                const BlockVector g_bar = precondition(s, grad);
                rec.rho_theta_pre = gpnr(g_bar.theta_norm(), p_theta);
                rec.rho_w_pre = gpnr(g_bar.w_norm(), p_w);
                optimizer_step(opt, p, g_bar);
            } else {
                rec.rho_theta_pre = rec.rho_theta;
                rec.rho_w_pre = rec.rho_w;
                optimizer_step(opt, p, grad);
            }
            res.trace.push_back(rec);

            if (cfg.patience > 0 && t - res.best_iteration >= cfg.patience) {
                res.early_stopped = true;
                break;
            }
        }
    } catch (const NumericError& e) {
        res.diverged = true;
        res.divergence = e.what();
    }
    res.iterations = res.trace.size();
    res.best_val_loss = best;
    res.final_params = std::move(p);
    return res;
}

} // namespace asymspec
