// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "asymspec/experiment.hpp"

namespace asymspec {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    double width = 640;
    double height = 400;
};

/// Standalone SVG line chart. Non-finite points (and non-positive ones on a
/// log axis) are skipped.
std::string svg_line_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series);

/// "36.76 ± 6.76"
std::string format_mean_std(double mean, double std);

struct EmittedFiles {
    std::vector<std::filesystem::path> written;
};

/// results.csv, summary.json and, when diagnostics exist, gpnr_trace.svg and
/// eigen_ratio_trace.svg. Throws std::runtime_error naming the path on IO failure.
EmittedFiles emit_report(const ExperimentResult& result, const std::filesystem::path& out_dir);

/// Bytes of results.csv; contains no wall-clock values.
std::string results_csv(const ExperimentResult& result);

std::string summary_json(const ExperimentResult& result);

} // namespace asymspec
