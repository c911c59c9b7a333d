// Copyright 2026 The asymspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "asymspec/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "asymspec/error.hpp"

namespace asymspec {

namespace fs = std::filesystem;

namespace {

std::string where(const fs::path& file, std::size_t line) { return file.string() + ":" + std::to_string(line) + ": "; }

std::ifstream open_in(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw LoadError("cannot open " + file.string());
    return in;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view tok, const fs::path& file, std::size_t line) {
    tok = trim(tok);
    T v{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw LoadError(where(file, line) + "cannot parse '" + std::string(tok) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const std::size_t j = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > j) out.push_back(s.substr(j, i - j));
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Graph make_graph(std::size_t n, std::vector<Edge> edges, Matrix x, std::vector<std::int32_t> labels, std::size_t c,
                 const fs::path& origin) {
    try {
        return Graph::make(n, std::move(edges), std::move(x), std::move(labels), c);
    } catch (const InputError& e) {
        throw LoadError(origin.string() + ": " + e.what());
    }
}

} // namespace

DatasetBundle load_dataset(const fs::path& dir) {
    const fs::path meta_file = dir / "meta.json";
    nlohmann::json meta;
    try {
        auto in = open_in(meta_file);
        meta = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(meta_file.string() + ": " + e.what());
    }
    std::size_t n = 0, d = 0, c = 0;
    DatasetBundle out;
    try {
        n = meta.at("n_nodes").get<std::size_t>();
        d = meta.at("n_features").get<std::size_t>();
        c = meta.at("n_classes").get<std::size_t>();
        out.name = meta.at("name").get<std::string>();
        out.provenance = meta.value("provenance", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(meta_file.string() + ": " + e.what());
    }
    if (n == 0 || d == 0 || c == 0) throw LoadError(meta_file.string() + ": counts must be positive");

    std::string line;
    std::size_t lineno = 0;

    const fs::path edge_file = dir / "edges.csv";
    std::vector<Edge> edges;
    {
        auto in = open_in(edge_file);
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            const auto cols = split(line, ',');
            if (cols.size() != 2) throw LoadError(where(edge_file, lineno) + "expected two columns");
            const auto u = parse_number<std::int64_t>(cols[0], edge_file, lineno);
            const auto v = parse_number<std::int64_t>(cols[1], edge_file, lineno);
            if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
                throw LoadError(where(edge_file, lineno) + "endpoint out of range");
            edges.emplace_back(u, v);
        }
    }

    const fs::path feat_file = dir / "features.csv";
    Matrix x(n, d);
    {
        auto in = open_in(feat_file);
        lineno = 0;
        std::size_t row = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            if (row >= n) throw LoadError(where(feat_file, lineno) + "more feature rows than n_nodes");
            const auto cols = split(line, ',');
            if (cols.size() != d)
                throw LoadError(where(feat_file, lineno) + "expected " + std::to_string(d) + " columns, found " +
                                std::to_string(cols.size()));
            for (std::size_t j = 0; j < d; ++j) x(row, j) = parse_number<double>(cols[j], feat_file, lineno);
            ++row;
        }
        if (row != n) throw LoadError(feat_file.string() + ": " + std::to_string(row) + " rows, expected " + std::to_string(n));
    }

    const fs::path label_file = dir / "labels.csv";
    std::vector<std::int32_t> labels;
    {
        auto in = open_in(label_file);
        lineno = 0;
        std::vector<bool> seen(c, false);
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            const auto y = parse_number<std::int32_t>(line, label_file, lineno);
            if (y < 0 || static_cast<std::size_t>(y) >= c)
                throw LoadError(where(label_file, lineno) + "label " + std::to_string(y) + " outside [0, " +
                                std::to_string(c) + ")");
            seen[static_cast<std::size_t>(y)] = true;
            labels.push_back(y);
        }
        if (labels.size() != n)
            throw LoadError(label_file.string() + ": " + std::to_string(labels.size()) + " labels, expected " +
                            std::to_string(n));
        for (std::size_t k = 0; k < c; ++k)
            if (!seen[k]) throw LoadError(label_file.string() + ": class " + std::to_string(k) + " never occurs");
    }

    out.graph = make_graph(n, std::move(edges), std::move(x), std::move(labels), c, dir);
    return out;
}

void save_dataset(const DatasetBundle& data, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw LoadError("cannot create " + dir.string() + ": " + ec.message());
    auto open_out = [](const fs::path& f) {
        std::ofstream out(f);
        if (!out) throw LoadError("cannot write " + f.string());
        return out;
    };
    const Graph& g = data.graph;
    nlohmann::json meta = {{"n_nodes", g.n_nodes},
                           {"n_features", g.features.cols()},
                           {"n_classes", g.n_classes},
                           {"name", data.name}};
    if (!data.provenance.empty()) meta["provenance"] = data.provenance;
    open_out(dir / "meta.json") << meta.dump(2) << '\n';

    auto edges = open_out(dir / "edges.csv");
    for (const auto& [u, v] : g.edges) edges << u << ',' << v << '\n';

    auto feats = open_out(dir / "features.csv");
    for (std::size_t i = 0; i < g.features.rows(); ++i) {
        const auto row = g.features.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) feats << (j ? "," : "") << format_double(row[j]);
        feats << '\n';
    }
    auto labels = open_out(dir / "labels.csv");
    for (auto y : g.labels) labels << y << '\n';
}

DatasetStats dataset_stats(const DatasetBundle& data) {
    const Graph& g = data.graph;
    DatasetStats s;
    s.n_nodes = g.n_nodes;
    s.n_edges = g.edges.size();
    s.n_features = g.features.cols();
    s.n_classes = g.n_classes;
    if (!g.edges.empty()) s.edge_homophily = edge_homophily(g);
    s.operator_radius = spectral_radius(graph_matrix(g, GraphOperator::shifted_norm_laplacian));
    return s;
}

DatasetBundle convert_node_table(const fs::path& node_file, const fs::path& edge_file, const std::string& name) {
    std::map<std::int64_t, std::pair<std::vector<double>, std::int64_t>> rows;
    std::string line;
    std::size_t lineno = 0;
    std::size_t d = 0;
    {
        auto in = open_in(node_file);
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty() || lineno == 1) continue;  // header
            const auto cols = split(line, '\t');
            if (cols.size() != 3) throw LoadError(where(node_file, lineno) + "expected id, features, label");
            const auto id = parse_number<std::int64_t>(cols[0], node_file, lineno);
            std::vector<double> f;
            for (auto tok : split(cols[1], ',')) f.push_back(parse_number<double>(tok, node_file, lineno));
            if (d == 0) d = f.size();
            if (f.size() != d) throw LoadError(where(node_file, lineno) + "feature length differs from first row");
            rows[id] = {std::move(f), parse_number<std::int64_t>(cols[2], node_file, lineno)};
        }
    }
    if (rows.empty()) throw LoadError(node_file.string() + ": no nodes");
    const std::size_t n = rows.size();
    if (rows.begin()->first != 0 || rows.rbegin()->first != static_cast<std::int64_t>(n - 1))
        throw LoadError(node_file.string() + ": node ids are not 0..n-1");

    std::set<std::int64_t> classes;
    for (const auto& [id, r] : rows) classes.insert(r.second);
    std::map<std::int64_t, std::int32_t> remap;
    for (auto c : classes) remap.emplace(c, static_cast<std::int32_t>(remap.size()));

    Matrix x(n, d);
    std::vector<std::int32_t> labels(n);
    for (const auto& [id, r] : rows) {
        std::copy(r.first.begin(), r.first.end(), x.row(static_cast<std::size_t>(id)).begin());
        labels[static_cast<std::size_t>(id)] = remap.at(r.second);
    }

    std::vector<Edge> edges;
    auto in = open_in(edge_file);
    lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || lineno == 1) continue;
        const auto cols = split_ws(line);
        if (cols.size() != 2) throw LoadError(where(edge_file, lineno) + "expected two node ids");
        const auto u = parse_number<std::int64_t>(cols[0], edge_file, lineno);
        const auto v = parse_number<std::int64_t>(cols[1], edge_file, lineno);
        if (u < 0 || v < 0 || u >= static_cast<std::int64_t>(n) || v >= static_cast<std::int64_t>(n))
            throw LoadError(where(edge_file, lineno) + "endpoint out of range");
        edges.emplace_back(u, v);
    }

    DatasetBundle out;
    out.name = name;
    out.provenance = "converted from " + node_file.filename().string() + " and " + edge_file.filename().string();
    out.graph = make_graph(n, std::move(edges), std::move(x), std::move(labels), classes.size(), node_file);
    return out;
}

DatasetBundle convert_content_cites(const fs::path& content_file, const fs::path& cites_file,
                                    const std::string& name) {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> feats;
    std::vector<std::string> label_names;
    std::string line;
    std::size_t lineno = 0;
    {
        auto in = open_in(content_file);
        while (std::getline(in, line)) {
            ++lineno;
            const auto cols = split_ws(line);
            if (cols.empty()) continue;
            if (cols.size() < 3) throw LoadError(where(content_file, lineno) + "expected id, features, label");
            std::vector<double> f;
            for (std::size_t j = 1; j + 1 < cols.size(); ++j)
                f.push_back(parse_number<double>(cols[j], content_file, lineno));
            if (!feats.empty() && f.size() != feats.front().size())
                throw LoadError(where(content_file, lineno) + "feature length differs from first row");
            ids.emplace_back(cols.front());
            feats.push_back(std::move(f));
            label_names.emplace_back(cols.back());
        }
    }
    if (ids.empty()) throw LoadError(content_file.string() + ": no nodes");
    const std::size_t n = ids.size(), d = feats.front().size();

    std::unordered_map<std::string, std::int64_t> index;
    for (std::size_t i = 0; i < n; ++i)
        if (!index.emplace(ids[i], static_cast<std::int64_t>(i)).second)
            throw LoadError(content_file.string() + ": duplicate node id " + ids[i]);

    const std::set<std::string> classes(label_names.begin(), label_names.end());
    std::map<std::string, std::int32_t> remap;
    for (const auto& c : classes) remap.emplace(c, static_cast<std::int32_t>(remap.size()));

    Matrix x(n, d);
    std::vector<std::int32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(feats[i].begin(), feats[i].end(), x.row(i).begin());
        labels[i] = remap.at(label_names[i]);
    }

    std::vector<Edge> edges;
    auto in = open_in(cites_file);
    lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto cols = split_ws(line);
        if (cols.empty()) continue;
        if (cols.size() != 2) throw LoadError(where(cites_file, lineno) + "expected two node ids");
        const auto a = index.find(std::string(cols[0]));
        const auto b = index.find(std::string(cols[1]));
        if (a == index.end() || b == index.end()) throw LoadError(where(cites_file, lineno) + "unknown node id");
        edges.emplace_back(a->second, b->second);
    }

    DatasetBundle out;
    out.name = name;
    out.provenance = "converted from " + content_file.filename().string() + " and " + cites_file.filename().string();
    out.graph = make_graph(n, std::move(edges), std::move(x), std::move(labels), classes.size(), content_file);
    return out;
}

} // namespace asymspec
