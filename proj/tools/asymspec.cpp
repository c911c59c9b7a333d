// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "asymspec/checkpoint.hpp"
#include "asymspec/dataset.hpp"
#include "asymspec/error.hpp"
#include "asymspec/experiment.hpp"
#include "asymspec/hessian.hpp"
#include "asymspec/kernels.hpp"
#include "asymspec/quadbench.hpp"
#include "asymspec/report.hpp"
#include "asymspec/version.hpp"

namespace fs = std::filesystem;
using namespace asymspec;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericError = 2;

struct RunArgs {
    std::string dataset;
    std::string model;
    std::string optimizer;
    std::string asym = "both";
    std::optional<std::size_t> seeds;
    std::string config;
    std::string out = "asymspec_out";
    std::optional<std::size_t> t_max;
    std::optional<std::size_t> spectrum_interval;
    bool checkpoints = false;
};

int cmd_run(const RunArgs& a) {
    ExperimentConfig cfg = a.config.empty() ? ExperimentConfig{} : load_config(a.config);
    if (!a.model.empty()) cfg.filter.family = parse_filter_family(a.model);
    if (!a.optimizer.empty()) cfg.optimizer.kind = parse_optimizer_kind(a.optimizer);
    if (a.seeds) {
        cfg.seeds.clear();
        for (std::uint64_t s = 0; s < *a.seeds; ++s) cfg.seeds.push_back(s);
    }
    if (a.t_max) cfg.t_max = *a.t_max;
    if (a.spectrum_interval) cfg.spectrum_interval = *a.spectrum_interval;
    cfg.validate();

    const bool base = a.asym == "off" || a.asym == "both";
    const bool asym = a.asym == "on" || a.asym == "both";

    const DatasetBundle data = load_dataset(a.dataset);
    fmt::print("{}: {} nodes, {} edges, {} features, {} classes; {} seeds, kernels: {}\n", data.name,
               data.graph.n_nodes, data.graph.edges.size(), data.graph.features.cols(), data.graph.n_classes,
               cfg.seeds.size(), kernels::active().name);

    const ExperimentResult res = run_experiment(cfg, data, base, asym, [](const SeedResult& s) {
        fmt::print("  seed {:>3} {:<2}  test {:6.2f}  best iter {:>4}/{:<4}{}\n", s.seed, to_string(s.arm),
                   s.test_accuracy, s.best_iteration, s.iterations, s.diverged ? "  DIVERGED: " + s.divergence : "");
        std::fflush(stdout);
    });
    const auto files = emit_report(res, a.out);

    if (a.checkpoints) {
        const fs::path dir = fs::path(a.out) / "checkpoints";
        fs::create_directories(dir);
        for (const RunReport* rep : {res.baseline ? &*res.baseline : nullptr, res.asymmetric ? &*res.asymmetric : nullptr}) {
            if (!rep) continue;
            for (const auto& run : rep->runs) {
                const SeedSetup setup = make_seed_setup(cfg, data, run.seed);
                save_checkpoint(make_checkpoint(cfg, data.name, setup.shape, run),
                                dir / fmt::format("seed{}_{}.json", run.seed, to_string(run.arm)));
            }
        }
    }

    fmt::print("{} / {} / {}:", data.name, to_string(cfg.filter.family), to_string(cfg.optimizer.kind));
    if (res.baseline) fmt::print("  S {}", format_mean_std(res.baseline->mean, res.baseline->std));
    if (res.asymmetric) fmt::print("  AS {}", format_mean_std(res.asymmetric->mean, res.asymmetric->std));
    if (const auto d = res.delta()) fmt::print("  delta {:+.2f}", *d);
    fmt::print("\n");
    for (const auto& f : files.written) fmt::print("wrote {}\n", f.string());

    for (const RunReport* rep : {res.baseline ? &*res.baseline : nullptr, res.asymmetric ? &*res.asymmetric : nullptr})
        if (rep && rep->n_valid == 0) {
            fmt::print(stderr, "every {} run diverged\n", to_string(rep->arm));
            return kNumericError;
        }
    return kOk;
}

int cmd_quadbench(std::size_t trials, std::size_t points, std::uint64_t seed, const std::string& out) {
    const TheoremSummary ts = run_theorem_trials(trials, seed);
    GpnrBoundReport total;
    const std::size_t problems = 10;
    for (std::size_t k = 0; k < problems; ++k) {
        const QuadraticProblem q = synth_quadratic(4, 16, 1.0 + k, 0.5, 0.3, seed + 1000 + k);
        const double scale = 0.01 * q.minimizer_vector().norm(Block::full);
        const auto r = gpnr_bound_trial(q, scale, points / problems, seed + 2000 + k);
        total.points += r.points;
        total.proximity_valid += r.proximity_valid;
        total.excluded += r.excluded;
        total.satisfied += r.satisfied;
        total.max_ratio = std::max(total.max_ratio, r.max_ratio);
    }
    fmt::print("theorem: {} trials, {} iterations, hypotheses held in {}, inequality held in {} ({:.2f}%)\n",
               ts.trials, ts.iterations, ts.hypotheses_held, ts.theorem_held, 100.0 * ts.satisfied_fraction());
    fmt::print("         scaling identity max relative error {:.3g} over {} checks; {} diverged trials\n",
               ts.max_identity_error, ts.identity_checks, ts.diverged_trials);
    fmt::print("         inequality failures without the block ordering: {}\n", ts.unordered_failures);
    fmt::print("gpnr bound: {} points, {} proximity-valid, {} satisfied ({:.2f}%), max rho/lambda {:.4f}\n",
               total.points, total.proximity_valid, total.satisfied, 100.0 * total.fraction(), total.max_ratio);
    if (!out.empty()) {
        fs::create_directories(out);
        const nlohmann::json j = {
            {"theorem",
             {{"trials", ts.trials},
              {"iterations", ts.iterations},
              {"hypotheses_held", ts.hypotheses_held},
              {"theorem_held", ts.theorem_held},
              {"max_identity_error", ts.max_identity_error},
              {"identity_checks", ts.identity_checks},
              {"diverged_trials", ts.diverged_trials},
              {"unordered_failures", ts.unordered_failures},
              {"consecutive_pair_held", ts.consecutive_pair_held}}},
            {"gpnr_bound",
             {{"points", total.points},
              {"proximity_valid", total.proximity_valid},
              {"excluded", total.excluded},
              {"satisfied", total.satisfied},
              {"max_ratio", total.max_ratio}}}};
        std::ofstream(fs::path(out) / "quadbench.json") << j.dump(2) << '\n';
    }
    return ts.theorem_held == ts.hypotheses_held && total.satisfied == total.proximity_valid ? kOk : kNumericError;
}

int cmd_audit(const std::string& ckpt_file, const std::string& dataset, double noise, std::uint64_t seed) {
    const Checkpoint c = load_checkpoint(ckpt_file);
    const DatasetBundle data = load_dataset(dataset);
    const SeedSetup setup = make_seed_setup(c.config, data, c.seed);
    if (setup.shape.w_size() != c.shape.w_size())
        throw InputError("checkpoint shape does not match dataset " + data.name);
    const PreparedData prep = prepare(c.config, data);
    const GnnObjective obj(setup.shape, prep.op, prep.features, prep.labels);
    const GradientOracle oracle = make_train_oracle(obj, setup.shape, setup.splits.train);

    AuditOptions opts;
    opts.noise_scale = noise;
    opts.seed = seed;
    opts.power = c.config.power;
    opts.rel_eps = c.config.hvp_rel_eps;
    const AuditReport r = assumption_audit(c.train, oracle, opts);

    fmt::print("checkpoint {} (seed {}, {}, best iteration {})\n", ckpt_file, c.seed, to_string(c.arm),
               c.train.best_iteration);
    fmt::print("perturbed point 1: rho {:.6g}  lambda_max {:.6g}  rho <= lambda: {}\n", r.first.rho,
               r.first.lambda_max, r.first.bound_holds);
    fmt::print("perturbed point 2: rho {:.6g}  lambda_max {:.6g}  rho <= lambda: {}\n", r.second.rho,
               r.second.lambda_max, r.second.bound_holds);
    fmt::print("rho and lambda_max ordered alike: {}{}\n", r.covary, r.points_equal ? " (points coincide)" : "");
    fmt::print("mild scaling: {} sampled iterations, {} violations\n", r.mild_scaling.size(),
               r.mild_scaling_violations);
    fmt::print("lambda_max(H) {:.6g} >= lambda_max(H_theta) {:.6g} >= lambda_max(H_W) {:.6g}: {}\n", r.lambda_full,
               r.lambda_theta, r.lambda_w, r.ordering_holds());
    return kOk;
}

int cmd_inspect(const std::string& dataset) {
    const DatasetBundle data = load_dataset(dataset);
    const DatasetStats s = dataset_stats(data);
    fmt::print("{:<16} {:>8} {:>9} {:>9} {:>8} {:>8}\n", "dataset", "nodes", "edges", "features", "classes",
               "H_edge");
    fmt::print("{:<16} {:>8} {:>9} {:>9} {:>8} {:>8}\n", data.name, s.n_nodes, s.n_edges, s.n_features, s.n_classes,
               s.edge_homophily ? fmt::format("{:.2f}", *s.edge_homophily) : std::string("n/a"));
    if (s.operator_radius > 1.0 + 1e-9)
        fmt::print(stderr, "warning: spectral radius of the shifted Laplacian is {:.6f} > 1\n", s.operator_radius);
    return kOk;
}

int cmd_convert(const std::string& format, const std::string& nodes, const std::string& edges,
                const std::string& name, const std::string& out) {
    DatasetBundle d;
    if (format == "node-table")
        d = convert_node_table(nodes, edges, name);
    else if (format == "content-cites")
        d = convert_content_cites(nodes, edges, name);
    else
        throw ConfigError("unknown format '" + format + "'");
    save_dataset(d, out);
    fmt::print("wrote {} ({} nodes, {} edges, {} classes)\n", out, d.graph.n_nodes, d.graph.edges.size(),
               d.graph.n_classes);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral GNN trainer with asymmetric preconditioning"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Train baseline (S) and asymmetric (AS) arms over seeds");
    run_cmd->add_option("--dataset", run.dataset, "Dataset bundle directory")->required();
    run_cmd->add_option("--model", run.model, "chebyshev | chebyshev_ii | jacobi | monomial | bernstein");
    run_cmd->add_option("--optimizer", run.optimizer, "gd | adam");
    run_cmd->add_option("--asym", run.asym, "on | off | both")->check(CLI::IsMember({"on", "off", "both"}));
    run_cmd->add_option("--seeds", run.seeds, "Use seeds 0..N-1");
    run_cmd->add_option("--config", run.config, "JSON experiment config");
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_option("--t-max", run.t_max, "Maximum iteration index");
    run_cmd->add_option("--spectrum-interval", run.spectrum_interval, "Sample Hessian block maxima every N iterations");
    run_cmd->add_flag("--checkpoints", run.checkpoints, "Write best-checkpoint files per seed and arm");

    std::size_t trials = 1000, points = 10000;
    std::uint64_t qb_seed = 0;
    std::string qb_out;
    auto* qb_cmd = app.add_subcommand("quadbench", "Theorem and GPNR-bound trials on synthetic quadratics");
    qb_cmd->add_option("--trials", trials, "Number of theorem trials");
    qb_cmd->add_option("--points", points, "Number of GPNR-bound sample points");
    qb_cmd->add_option("--seed", qb_seed, "Random seed");
    qb_cmd->add_option("--out", qb_out, "Output directory for quadbench.json");

    std::string ckpt, audit_data;
    double noise = 0.1;
    std::uint64_t audit_seed = 0;
    auto* audit_cmd = app.add_subcommand("audit", "Assumption audit at a saved checkpoint");
    audit_cmd->add_option("--checkpoint", ckpt, "Checkpoint file")->required();
    audit_cmd->add_option("--dataset", audit_data, "Dataset bundle directory")->required();
    audit_cmd->add_option("--noise", noise, "Perturbation scale");
    audit_cmd->add_option("--seed", audit_seed, "Noise seed");

    std::string inspect_data;
    auto* inspect_cmd = app.add_subcommand("inspect", "Print dataset statistics");
    inspect_cmd->add_option("--dataset", inspect_data, "Dataset bundle directory")->required();

    std::string conv_format, conv_nodes, conv_edges, conv_name, conv_out;
    auto* conv_cmd = app.add_subcommand("convert", "Convert a public dataset dump into a bundle");
    conv_cmd->add_option("--format", conv_format, "node-table | content-cites")->required();
    conv_cmd->add_option("--nodes", conv_nodes, "Node table or content file")->required();
    conv_cmd->add_option("--edges", conv_edges, "Edge list or cites file")->required();
    conv_cmd->add_option("--name", conv_name, "Dataset name")->required();
    conv_cmd->add_option("--out", conv_out, "Bundle directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*qb_cmd) return cmd_quadbench(trials, points, qb_seed, qb_out);
        if (*audit_cmd) return cmd_audit(ckpt, audit_data, noise, audit_seed);
        if (*inspect_cmd) return cmd_inspect(inspect_data);
        if (*conv_cmd) return cmd_convert(conv_format, conv_nodes, conv_edges, conv_name, conv_out);
    } catch (const NumericError& e) {
        fmt::print(stderr, "numeric failure: {}\n", e.what());
        return kNumericError;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kConfigError;
    }
    return kOk;
}
