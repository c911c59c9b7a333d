// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/experiment.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "asymspec/error.hpp"

namespace asymspec {

using nlohmann::json;

void ExperimentConfig::validate() const {
    try {
        filter.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("filter: ") + e.what());
    }
    optimizer.validate();
    if (hidden == 0) throw ConfigError("hidden must be positive");
    auto rate = [](double p) { return p >= 0.0 && p < 1.0; };
    if (!rate(dropout.input) || !rate(dropout.hidden)) throw ConfigError("dropout rates must lie in [0, 1)");
    if (!(beta_theta >= 0.0 && beta_theta <= 1.0) || !(beta_w >= 0.0 && beta_w <= 1.0))
        throw ConfigError("beta_theta and beta_w must lie in [0, 1]");
    if (t_max < 1) throw ConfigError("t_max must be at least 1");
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    if (scale_clamp && !(scale_clamp->first > 0.0 && scale_clamp->first <= scale_clamp->second))
        throw ConfigError("scale_clamp must satisfy 0 < lo <= hi");
    if (!(power.tol > 0.0) || power.max_iter == 0) throw ConfigError("power iteration settings must be positive");
    if (!(hvp_rel_eps > 0.0)) throw ConfigError("hvp_rel_eps must be positive");
}

ExperimentConfig config_from_json(std::string_view text) {
    ExperimentConfig c;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known = {
        "model", "order", "jacobi_a", "jacobi_b", "init_alpha", "hidden", "optimizer", "lr_theta", "lr_w",
        "weight_decay_theta", "weight_decay_w", "adam_beta1", "adam_beta2", "adam_eps", "dropout_input",
        "dropout_hidden", "beta_theta", "beta_w", "t_max", "patience", "scale_clamp", "seeds", "split",
        "spectrum_interval", "power_tol", "power_max_iter", "hvp_rel_eps"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");

    try {
        if (j.contains("model")) c.filter.family = parse_filter_family(j["model"].get<std::string>());
        if (j.contains("order")) c.filter.order = j["order"].get<std::size_t>();
        if (j.contains("jacobi_a")) c.filter.jacobi_a = j["jacobi_a"].get<double>();
        if (j.contains("jacobi_b")) c.filter.jacobi_b = j["jacobi_b"].get<double>();
        if (j.contains("init_alpha") && !j["init_alpha"].is_null()) c.init_alpha = j["init_alpha"].get<double>();
        if (j.contains("hidden")) c.hidden = j["hidden"].get<std::size_t>();
        if (j.contains("optimizer")) c.optimizer.kind = parse_optimizer_kind(j["optimizer"].get<std::string>());
        if (j.contains("lr_theta")) c.optimizer.lr_theta = j["lr_theta"].get<double>();
        if (j.contains("lr_w")) c.optimizer.lr_w = j["lr_w"].get<double>();
        if (j.contains("weight_decay_theta")) c.optimizer.weight_decay_theta = j["weight_decay_theta"].get<double>();
        if (j.contains("weight_decay_w")) c.optimizer.weight_decay_w = j["weight_decay_w"].get<double>();
        if (j.contains("adam_beta1")) c.optimizer.beta1 = j["adam_beta1"].get<double>();
        if (j.contains("adam_beta2")) c.optimizer.beta2 = j["adam_beta2"].get<double>();
        if (j.contains("adam_eps")) c.optimizer.eps = j["adam_eps"].get<double>();
        if (j.contains("dropout_input")) c.dropout.input = j["dropout_input"].get<double>();
        if (j.contains("dropout_hidden")) c.dropout.hidden = j["dropout_hidden"].get<double>();
        if (j.contains("beta_theta")) c.beta_theta = j["beta_theta"].get<double>();
        if (j.contains("beta_w")) c.beta_w = j["beta_w"].get<double>();
        if (j.contains("t_max")) c.t_max = j["t_max"].get<std::size_t>();
        if (j.contains("patience")) c.patience = j["patience"].get<std::size_t>();
        if (j.contains("scale_clamp") && !j["scale_clamp"].is_null()) {
            const auto& s = j["scale_clamp"];
            if (!s.is_array() || s.size() != 2) throw ConfigError("scale_clamp must be [lo, hi]");
            c.scale_clamp = std::pair{s[0].get<double>(), s[1].get<double>()};
        }
        if (j.contains("seeds")) {
            const auto& s = j["seeds"];
            c.seeds.clear();
            if (s.is_number_integer()) {
                for (std::uint64_t k = 0; k < s.get<std::uint64_t>(); ++k) c.seeds.push_back(k);
            } else {
                c.seeds = s.get<std::vector<std::uint64_t>>();
            }
        }
        if (j.contains("split")) {
            const auto& s = j["split"];
            const auto policy = s.at("policy").get<std::string>();
            if (policy == "fractional") {
                c.split = FractionalSplit{s.value("train", 0.025), s.value("val", 0.025)};
            } else if (policy == "per_class") {
                c.split = PerClassSplit{s.value("per_class", std::size_t{20}), s.value("n_val", std::size_t{500}),
                                        s.value("n_test", std::size_t{1000})};
            } else {
                throw ConfigError("unknown split policy '" + policy + "'");
            }
        }
        if (j.contains("spectrum_interval")) c.spectrum_interval = j["spectrum_interval"].get<std::size_t>();
        if (j.contains("power_tol")) c.power.tol = j["power_tol"].get<double>();
        if (j.contains("power_max_iter")) c.power.max_iter = j["power_max_iter"].get<std::size_t>();
        if (j.contains("hvp_rel_eps")) c.hvp_rel_eps = j["hvp_rel_eps"].get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["model"] = std::string(to_string(c.filter.family));
    j["order"] = c.filter.order;
    j["jacobi_a"] = c.filter.jacobi_a;
    j["jacobi_b"] = c.filter.jacobi_b;
    j["init_alpha"] = c.init_alpha ? json(*c.init_alpha) : json(nullptr);
    j["hidden"] = c.hidden;
    j["optimizer"] = std::string(to_string(c.optimizer.kind));
    j["lr_theta"] = c.optimizer.lr_theta;
    j["lr_w"] = c.optimizer.lr_w;
    j["weight_decay_theta"] = c.optimizer.weight_decay_theta;
    j["weight_decay_w"] = c.optimizer.weight_decay_w;
    j["adam_beta1"] = c.optimizer.beta1;
    j["adam_beta2"] = c.optimizer.beta2;
    j["adam_eps"] = c.optimizer.eps;
    j["dropout_input"] = c.dropout.input;
    j["dropout_hidden"] = c.dropout.hidden;
    j["beta_theta"] = c.beta_theta;
    j["beta_w"] = c.beta_w;
    j["t_max"] = c.t_max;
    j["patience"] = c.patience;
    j["scale_clamp"] = c.scale_clamp ? json::array({c.scale_clamp->first, c.scale_clamp->second}) : json(nullptr);
    j["seeds"] = c.seeds;
    if (const auto* f = std::get_if<FractionalSplit>(&c.split)) {
        j["split"] = {{"policy", "fractional"}, {"train", f->train}, {"val", f->val}};
    } else {
        const auto& p = std::get<PerClassSplit>(c.split);
        j["split"] = {{"policy", "per_class"}, {"per_class", p.per_class}, {"n_val", p.n_val}, {"n_test", p.n_test}};
    }
    j["spectrum_interval"] = c.spectrum_interval;
    j["power_tol"] = c.power.tol;
    j["power_max_iter"] = c.power.max_iter;
    j["hvp_rel_eps"] = c.hvp_rel_eps;
    return j.dump(2);
}

std::string_view to_string(Arm a) noexcept { return a == Arm::baseline ? "S" : "AS"; }

void aggregate(RunReport& r) {
    double sum = 0.0;
    std::size_t n = 0;
    r.seconds = 0.0;
    for (const auto& s : r.runs) {
        r.seconds += s.seconds;
        if (s.diverged) continue;
        sum += s.test_accuracy;
        ++n;
    }
    r.n_valid = n;
    r.mean = n ? sum / static_cast<double>(n) : 0.0;
    double ss = 0.0;
    for (const auto& s : r.runs)
        if (!s.diverged) ss += (s.test_accuracy - r.mean) * (s.test_accuracy - r.mean);
    r.std = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
}

std::optional<double> ExperimentResult::delta() const {
    if (!baseline || !asymmetric || baseline->n_valid == 0 || asymmetric->n_valid == 0) return std::nullopt;
    return asymmetric->mean - baseline->mean;
}

SeedSetup make_seed_setup(const ExperimentConfig& cfg, const DatasetBundle& data, std::uint64_t seed) {
    const Graph& g = data.graph;
    SeedSetup s;
    s.shape.in_features = g.features.cols();
    s.shape.hidden = cfg.hidden;
    s.shape.classes = g.n_classes;
    s.shape.filter = cfg.filter;
    s.splits = make_splits(g.n_nodes, g.labels, cfg.split, seed);
    s.init = init_params(seed, s.shape, cfg.init_alpha);
    return s;
}

PreparedData prepare(const ExperimentConfig& cfg, const DatasetBundle& data) {
    PreparedData p;
    p.features = std::make_shared<const Matrix>(data.graph.features);
    p.op = graph_matrix(data.graph, cfg.filter.graph_operator());
    p.labels = data.graph.labels;
    return p;
}

GradientOracle make_train_oracle(const GnnObjective& obj, const ModelShape& shape, std::vector<std::size_t> train) {
    return [&obj, shape, train = std::move(train)](const BlockVector& p, BlockVector& grad) {
        return obj.loss_and_gradient(ModelParams(shape, p), train, ForwardMode::eval(), grad);
    };
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a * 0x9E3779B97F4A7C15ULL + b + 0x632BE59BD9B14E5BULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

SeedResult train_seed(const ExperimentConfig& cfg, const PreparedData& prep, const SeedSetup& setup, Arm arm) {
    const auto t0 = std::chrono::steady_clock::now();
    const GnnObjective obj(setup.shape, prep.op, prep.features, prep.labels);
    const auto& train = setup.splits.train;
    const auto& val = setup.splits.val;
    const std::uint64_t seed = setup.splits.seed;

    TrainConfig tc;
    tc.optimizer = cfg.optimizer;
    tc.precondition = arm == Arm::asymmetric;
    tc.beta_theta = cfg.beta_theta;
    tc.beta_w = cfg.beta_w;
    tc.t_max = cfg.t_max;
    tc.patience = cfg.patience;
    tc.scale_clamp = cfg.scale_clamp;
    tc.spectrum_interval = cfg.spectrum_interval;

    const GradientFn gradient = [&](const BlockVector& p, std::size_t t, BlockVector& grad) {
        return obj.loss_and_gradient(ModelParams(setup.shape, p), train,
                                     ForwardMode::training(cfg.dropout, mix(seed, t)), grad);
    };
    const ValidationFn validation = [&](const BlockVector& p) { return obj.loss(ModelParams(setup.shape, p), val); };
    SpectrumFn spectrum;
    if (cfg.spectrum_interval > 0)
        spectrum = make_spectrum_fn(make_train_oracle(obj, setup.shape, train), cfg.power, false, cfg.hvp_rel_eps);

    SeedResult r;
    r.seed = seed;
    r.arm = arm;
    r.train = asymmetric_train(tc, setup.init.values(), gradient, validation, spectrum);
    r.diverged = r.train.diverged;
    r.divergence = r.train.divergence;
    r.best_val_loss = r.train.best_val_loss;
    r.best_iteration = r.train.best_iteration;
    r.iterations = r.train.iterations;
    if (!r.train.trace.empty()) {
        const ModelParams best(setup.shape, r.train.best);
        try {
            r.test_accuracy = obj.accuracy(best, setup.splits.test);
            r.val_accuracy = obj.accuracy(best, val);
            r.train_accuracy = obj.accuracy(best, train);
        } catch (const NumericError& e) {
            r.diverged = true;
            r.divergence = e.what();
        }
    } else {
        r.diverged = true;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ASYMSPEC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) n = static_cast<std::size_t>(v);
    }
    return n;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const DatasetBundle& data, bool run_baseline,
                                bool run_asymmetric, const ProgressFn& progress) {
    cfg.validate();
    ExperimentResult res;
    res.config = cfg;
    res.dataset = data.name;
    res.stats = dataset_stats(data);

    const PreparedData prep = prepare(cfg, data);
    std::vector<SeedSetup> setups;
    for (auto seed : cfg.seeds) setups.push_back(make_seed_setup(cfg, data, seed));

    std::vector<std::pair<std::size_t, Arm>> jobs;
    for (std::size_t i = 0; i < setups.size(); ++i) {
        if (run_baseline) jobs.emplace_back(i, Arm::baseline);
        if (run_asymmetric) jobs.emplace_back(i, Arm::asymmetric);
    }
    std::vector<SeedResult> out(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::exception_ptr failure;

    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            try {
                out[k] = train_seed(cfg, prep, setups[jobs[k].first], jobs[k].second);
                if (progress) {
                    std::lock_guard lock(mu);
                    progress(out[k]);
                }
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next = jobs.size();
            }
        }
    };
    const std::size_t n_workers = std::min(worker_count(), std::max<std::size_t>(jobs.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    if (run_baseline) res.baseline = RunReport{Arm::baseline, {}, 0, 0, 0, 0};
    if (run_asymmetric) res.asymmetric = RunReport{Arm::asymmetric, {}, 0, 0, 0, 0};
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        auto& rep = jobs[k].second == Arm::baseline ? *res.baseline : *res.asymmetric;
        rep.runs.push_back(std::move(out[k]));
    }
    if (res.baseline) aggregate(*res.baseline);
    if (res.asymmetric) aggregate(*res.asymmetric);
    return res;
}

} // namespace asymspec
