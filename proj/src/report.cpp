// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/report.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include "asymspec/version.hpp"

namespace asymspec {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

struct ArmView {
    std::string name;
    const RunReport* report;
};

std::vector<ArmView> arms(const ExperimentResult& r) {
    std::vector<ArmView> v;
    if (r.baseline) v.push_back({std::string(to_string(Arm::baseline)), &*r.baseline});
    if (r.asymmetric) v.push_back({std::string(to_string(Arm::asymmetric)), &*r.asymmetric});
    return v;
}

// Per-iteration mean over the runs that reached each iteration.
template <typename Get>
PlotSeries mean_trace(const RunReport& rep, const std::string& label, Get get) {
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (const auto& run : rep.runs)
        for (const auto& rec : run.train.trace)
            if (auto v = get(rec)) {
                auto& [s, n] = acc[rec.t];
                s += *v;
                ++n;
            }
    PlotSeries ps;
    ps.label = label;
    for (const auto& [t, sn] : acc) {
        ps.x.push_back(static_cast<double>(t));
        ps.y.push_back(sn.first / static_cast<double>(sn.second));
    }
    return ps;
}

struct ArmDiagnostics {
    std::optional<double> kappa_mean;
    std::size_t kappa_samples = 0;
    double rho_theta_gt_w = 0.0;
    std::size_t iterations = 0;
};

ArmDiagnostics diagnostics(const RunReport& rep) {
    ArmDiagnostics d;
    double ksum = 0.0;
    std::size_t gt = 0;
    for (const auto& run : rep.runs)
        for (const auto& rec : run.train.trace) {
            ++d.iterations;
            if (rec.rho_theta > rec.rho_w) ++gt;
            if (rec.kappa_block) {
                ksum += *rec.kappa_block;
                ++d.kappa_samples;
            }
        }
    if (d.kappa_samples) d.kappa_mean = ksum / static_cast<double>(d.kappa_samples);
    if (d.iterations) d.rho_theta_gt_w = static_cast<double>(gt) / static_cast<double>(d.iterations);
    return d;
}

void write_file(const fs::path& p, const std::string& content, EmittedFiles& files) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + p.string());
    files.written.push_back(p);
}

} // namespace

std::string svg_line_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    const double left = 70, right = 150, top = 40, bottom = 50;
    const double pw = spec.width - left - right, ph = spec.height - top - bottom;
    auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
    auto usable = [&](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!spec.log_y || y > 0.0); };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (usable(s.x[i], s.y[i])) {
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, ty(s.y[i]));
                y1 = std::max(y1, ty(s.y[i]));
            }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };

    std::string out = fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
        "<text x=\"{2}\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{3}</text>\n"
        "<rect x=\"{4}\" y=\"{5}\" width=\"{6}\" height=\"{7}\" fill=\"none\" stroke=\"black\"/>\n",
        spec.width, spec.height, left + pw / 2, xml_escape(spec.title), left, top, pw, ph);

    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4.0, fy = y0 + (y1 - y0) * k / 4.0;
        const double sx = left + pw * k / 4.0, sy = top + ph * (1.0 - k / 4.0);
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
                           "text-anchor=\"middle\">{:.4g}</text>\n",
                           sx, top + ph + 16, fx);
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
                           "text-anchor=\"end\">{:.3g}</text>\n",
                           left - 6, sy + 4, spec.log_y ? std::pow(10.0, fy) : fy);
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "text-anchor=\"middle\">{}</text>\n",
                       left + pw / 2, spec.height - 12, xml_escape(spec.x_label));
    out += fmt::format("<text x=\"16\" y=\"{0}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
                       top + ph / 2, xml_escape(spec.y_label + (spec.log_y ? " (log)" : "")));

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        std::string pts;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (usable(s.x[i], s.y[i])) pts += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
        if (!pts.empty()) {
            pts.pop_back();
            out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
                               pts);
        }
        const double ly = top + 14 + 18.0 * static_cast<double>(k);
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                           left + pw + 10, ly, left + pw + 30, color);
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                           left + pw + 35, ly + 4, xml_escape(s.label));
    }
    out += "</svg>\n";
    return out;
}

std::string format_mean_std(double mean, double std) { return fmt::format("{:.2f} ± {:.2f}", mean, std); }

std::string results_csv(const ExperimentResult& r) {
    std::string out =
        "dataset,model,optimizer,arm,seed,test_acc,val_acc,train_acc,best_val_loss,best_iteration,iterations,"
        "diverged\n";
    for (const auto& a : arms(r))
        for (const auto& s : a.report->runs)
            out += fmt::format("{},{},{},{},{},{:.2f},{:.2f},{:.2f},{:.17g},{},{},{}\n", r.dataset,
                               to_string(r.config.filter.family), to_string(r.config.optimizer.kind), a.name, s.seed,
                               s.test_accuracy, s.val_accuracy, s.train_accuracy, s.best_val_loss, s.best_iteration,
                               s.iterations, s.diverged ? 1 : 0);
    return out;
}

std::string summary_json(const ExperimentResult& r) {
    json j;
    j["dataset"] = r.dataset;
    j["statistics"] = {{"n_nodes", r.stats.n_nodes},
                       {"n_edges", r.stats.n_edges},
                       {"n_features", r.stats.n_features},
                       {"n_classes", r.stats.n_classes},
                       {"edge_homophily", r.stats.edge_homophily ? json(*r.stats.edge_homophily) : json(nullptr)}};
    j["config"] = json::parse(config_to_json(r.config));
    j["splits"] = "re-drawn per seed; both arms of a seed share splits and initial parameters";
    j["accuracy_unit"] = "percent";
    for (const auto& a : arms(r)) {
        const RunReport& rep = *a.report;
        json accs = json::array();
        json diverged = json::array();
        for (const auto& s : rep.runs) {
            accs.push_back(s.test_accuracy);
            if (s.diverged) diverged.push_back(s.seed);
        }
        const ArmDiagnostics d = diagnostics(rep);
        j["arms"][a.name] = {{"mean", rep.mean},
                             {"std", rep.std},
                             {"cell", format_mean_std(rep.mean, rep.std)},
                             {"n_valid", rep.n_valid},
                             {"test_accuracy", accs},
                             {"diverged_seeds", diverged},
                             {"wall_clock_seconds", rep.seconds},
                             {"rho_theta_gt_rho_w_fraction", d.rho_theta_gt_w},
                             {"kappa_block_mean", d.kappa_mean ? json(*d.kappa_mean) : json(nullptr)},
                             {"kappa_block_samples", d.kappa_samples}};
    }
    const auto delta = r.delta();
    j["delta"] = delta ? json(*delta) : json(nullptr);
    j["code_version"] = kVersion;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    j["generated_at"] = buf;
    return j.dump(2);
}

EmittedFiles emit_report(const ExperimentResult& r, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
    EmittedFiles files;
    write_file(out_dir / "results.csv", results_csv(r), files);
    write_file(out_dir / "summary.json", summary_json(r) + "\n", files);

    std::vector<PlotSeries> gpnr, kappa;
    for (const auto& a : arms(r)) {
        auto th = mean_trace(*a.report, a.name + " rho_theta", [](const DiagnosticsRecord& d) {
            return std::optional<double>(d.rho_theta);
        });
        auto w = mean_trace(*a.report, a.name + " rho_W",
                            [](const DiagnosticsRecord& d) { return std::optional<double>(d.rho_w); });
        if (!th.x.empty()) {
            gpnr.push_back(std::move(th));
            gpnr.push_back(std::move(w));
        }
        auto k = mean_trace(*a.report, a.name + " kappa'", [](const DiagnosticsRecord& d) { return d.kappa_block; });
        if (!k.x.empty()) kappa.push_back(std::move(k));
    }
    if (!gpnr.empty())
        write_file(out_dir / "gpnr_trace.svg",
                   svg_line_plot({r.dataset + ": gradient-parameter norm ratio", "iteration", "GPNR", true}, gpnr),
                   files);
    if (!kappa.empty())
        write_file(out_dir / "eigen_ratio_trace.svg",
                   svg_line_plot({r.dataset + ": block eigenvalue ratio", "iteration", "lambda ratio", true}, kappa),
                   files);
    return files;
}

} // namespace asymspec
