// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/checkpoint.hpp"

#include <json.hpp>

#include <fstream>

#include "asymspec/error.hpp"
#include "asymspec/version.hpp"

namespace asymspec {

using nlohmann::json;

Checkpoint make_checkpoint(const ExperimentConfig& cfg, const std::string& dataset, const ModelShape& shape,
                           const SeedResult& run) {
    Checkpoint c;
    c.config = cfg;
    c.dataset = dataset;
    c.seed = run.seed;
    c.arm = run.arm;
    c.shape = shape;
    c.train.best = run.train.best;
    c.train.best_val_loss = run.train.best_val_loss;
    c.train.best_iteration = run.train.best_iteration;
    c.train.trace = run.train.trace;
    c.train.iterations = run.train.iterations;
    return c;
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& file) {
    json j;
    j["format"] = "asymspec-checkpoint";
    j["code_version"] = kVersion;
    j["config"] = json::parse(config_to_json(c.config));
    j["dataset"] = c.dataset;
    j["seed"] = c.seed;
    j["arm"] = std::string(to_string(c.arm));
    j["shape"] = {{"in_features", c.shape.in_features}, {"hidden", c.shape.hidden}, {"classes", c.shape.classes}};
    j["best_val_loss"] = c.train.best_val_loss;
    j["best_iteration"] = c.train.best_iteration;
    j["iterations"] = c.train.iterations;
    j["theta_size"] = c.train.best.theta_size();
    j["params"] = std::vector<double>(c.train.best.all().begin(), c.train.best.all().end());
    json trace = json::array();
    for (const auto& r : c.train.trace) {
        json e = {{"t", r.t},           {"train_loss", r.train_loss}, {"val_loss", r.val_loss},
                  {"rho_theta", r.rho_theta}, {"rho_w", r.rho_w},         {"s_theta", r.s_theta},
                  {"s_w", r.s_w}};
        if (r.spectrum) {
            e["lambda_theta"] = r.spectrum->lambda_theta;
            e["lambda_w"] = r.spectrum->lambda_w;
        }
        trace.push_back(std::move(e));
    }
    j["trace"] = std::move(trace);
    std::ofstream out(file);
    if (!out) throw LoadError("cannot write checkpoint " + file.string());
    out << j.dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw LoadError("cannot open checkpoint " + file.string());
    Checkpoint c;
    try {
        const json j = json::parse(in);
        if (j.value("format", std::string()) != "asymspec-checkpoint")
            throw LoadError(file.string() + ": not a checkpoint file");
        c.config = config_from_json(j.at("config").dump());
        c.dataset = j.at("dataset").get<std::string>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.arm = j.at("arm").get<std::string>() == "AS" ? Arm::asymmetric : Arm::baseline;
        c.shape.in_features = j.at("shape").at("in_features").get<std::size_t>();
        c.shape.hidden = j.at("shape").at("hidden").get<std::size_t>();
        c.shape.classes = j.at("shape").at("classes").get<std::size_t>();
        c.shape.filter = c.config.filter;
        c.train.best_val_loss = j.at("best_val_loss").get<double>();
        c.train.best_iteration = j.at("best_iteration").get<std::size_t>();
        c.train.iterations = j.at("iterations").get<std::size_t>();
        c.train.best = BlockVector(j.at("theta_size").get<std::size_t>(), j.at("params").get<std::vector<double>>());
        if (c.train.best.theta_size() != c.shape.theta_size() || c.train.best.w_size() != c.shape.w_size())
            throw LoadError(file.string() + ": parameter vector does not match the recorded shape");
        for (const auto& e : j.at("trace")) {
            DiagnosticsRecord r;
            r.t = e.at("t").get<std::size_t>();
            r.train_loss = e.at("train_loss").get<double>();
            r.val_loss = e.at("val_loss").get<double>();
            r.rho_theta = e.at("rho_theta").get<double>();
            r.rho_w = e.at("rho_w").get<double>();
            r.s_theta = e.at("s_theta").get<double>();
            r.s_w = e.at("s_w").get<double>();
            if (e.contains("lambda_theta"))
                r.spectrum = BlockSpectrum{e["lambda_theta"].get<double>(), e["lambda_w"].get<double>(), std::nullopt};
            c.train.trace.push_back(r);
        }
    } catch (const json::exception& e) {
        throw LoadError(file.string() + ": " + e.what());
    } catch (const ConfigError& e) {
        throw LoadError(file.string() + ": " + e.what());
    }
    return c;
}

} // namespace asymspec
