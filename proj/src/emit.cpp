// Copyright 2026 The ecgap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ecgap/harness.hpp"
#include "json.hpp"

namespace ecgap {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, std::span<const SweepRecord> records) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.d << ',' << format_double(r.p) << ',' << r.sample << ',' << to_string(r.method) << ','
            << (r.defined ? 1 : 0) << ',' << (r.gap_db ? format_double(*r.gap_db) : "") << ',' << r.visited_nodes
            << ',' << r.extra_nodes << ',' << format_double(r.max_growth_db) << ',' << r.nodes_in_clusters << '\n';
    }
}

namespace {

template <typename T>
T parse_field(std::string_view s, std::size_t line) {
    T value{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError(line, "malformed field '" + std::string(s) + "'");
    return value;
}

std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        auto comma = s.find(',');
        out.push_back(s.substr(0, comma));
        if (comma == std::string_view::npos)
            break;
        s = s.substr(comma + 1);
    }
    return out;
}

}  // namespace

std::vector<SweepRecord> read_csv(std::istream& in) {
    std::vector<SweepRecord> out;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.starts_with('#'))
            continue;
        if (!header_seen) {
            if (line != kCsvHeader)
                throw ParseError(line_no, "unexpected CSV header");
            header_seen = true;
            continue;
        }
        auto f = split_commas(line);
        if (f.size() != 10)
            throw ParseError(line_no, "expected 10 fields, got " + std::to_string(f.size()));
        SweepRecord r;
        r.d = parse_field<int>(f[0], line_no);
        r.p = parse_field<double>(f[1], line_no);
        r.sample = parse_field<std::uint64_t>(f[2], line_no);
        try {
            r.method = gap_kind_from_string(f[3]);
        } catch (const InvalidParameter& e) {
            throw ParseError(line_no, e.what());
        }
        r.defined = parse_field<int>(f[4], line_no) != 0;
        if (!f[5].empty())
            r.gap_db = parse_field<double>(f[5], line_no);
        if (r.defined != r.gap_db.has_value())
            throw ParseError(line_no, "gap_db must be present exactly when defined");
        r.visited_nodes = parse_field<std::uint64_t>(f[6], line_no);
        r.extra_nodes = parse_field<std::uint64_t>(f[7], line_no);
        r.max_growth_db = parse_field<double>(f[8], line_no);
        r.nodes_in_clusters = parse_field<std::uint64_t>(f[9], line_no);
        out.push_back(r);
    }
    if (!header_seen)
        throw ParseError(line_no, "missing CSV header");
    return out;
}

void write_aggregates_csv(std::ostream& out, std::span<const Aggregate> aggregates, const SweepConfig& cfg) {
    out << "# epsilon_max_db=" << format_double(cfg.epsilon_max_db) << " samples=" << cfg.samples
        << " seed=" << cfg.master_seed << " skip_empty_syndromes=" << (cfg.skip_empty_syndromes ? 1 : 0) << '\n';
    out << "# visited statistics exclude samples without detection events; fraction_below uses n = "
        << (cfg.skip_empty_syndromes ? "samples with detection events" : "all samples") << '\n';
    out << "d,p,method,samples,empty_samples,n,fraction_below,fraction_below_se,mean_visited,std_visited,"
           "mean_extra_nodes,std_extra_nodes,mean_max_growth_db,std_max_growth_db,mean_nodes_in_clusters,"
           "std_nodes_in_clusters\n";
    for (const auto& a : aggregates) {
        out << a.d << ',' << format_double(a.p) << ',' << to_string(a.method) << ',' << a.samples << ','
            << a.empty_samples << ',' << a.n << ',' << format_double(a.fraction_below()) << ','
            << format_double(a.fraction_below_se()) << ',' << format_double(a.visited.mean()) << ','
            << format_double(a.visited.stddev()) << ',' << format_double(a.extra_nodes.mean()) << ','
            << format_double(a.extra_nodes.stddev()) << ',' << format_double(a.max_growth_db.mean()) << ','
            << format_double(a.max_growth_db.stddev()) << ',' << format_double(a.nodes_in_clusters.mean()) << ','
            << format_double(a.nodes_in_clusters.stddev()) << '\n';
    }
}

void write_json(std::ostream& out, std::span<const SweepRecord> records, std::span<const Aggregate> aggregates,
                const SweepConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["metadata"] = {
        {"epsilon_max_db", cfg.epsilon_max_db},
        {"samples", cfg.samples},
        {"seed", cfg.master_seed},
        {"skip_empty_syndromes", cfg.skip_empty_syndromes},
    };
    auto& recs = doc["records"] = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["d"] = r.d;
        j["p"] = r.p;
        j["sample"] = r.sample;
        j["method"] = std::string(to_string(r.method));
        j["defined"] = r.defined;
        j["gap_db"] = r.gap_db ? nlohmann::ordered_json(*r.gap_db) : nlohmann::ordered_json(nullptr);
        j["visited_nodes"] = r.visited_nodes;
        j["extra_nodes"] = r.extra_nodes;
        j["max_growth_db"] = r.max_growth_db;
        j["nodes_in_clusters"] = r.nodes_in_clusters;
        recs.push_back(std::move(j));
    }
    auto& aggs = doc["aggregates"] = nlohmann::ordered_json::array();
    for (const auto& a : aggregates) {
        aggs.push_back({
            {"d", a.d},
            {"p", a.p},
            {"method", std::string(to_string(a.method))},
            {"samples", a.samples},
            {"empty_samples", a.empty_samples},
            {"n", a.n},
            {"fraction_below", a.fraction_below()},
            {"fraction_below_se", a.fraction_below_se()},
            {"mean_visited", a.visited.mean()},
            {"std_visited", a.visited.stddev()},
            {"mean_extra_nodes", a.extra_nodes.mean()},
            {"std_extra_nodes", a.extra_nodes.stddev()},
            {"mean_max_growth_db", a.max_growth_db.mean()},
            {"std_max_growth_db", a.max_growth_db.stddev()},
            {"mean_nodes_in_clusters", a.nodes_in_clusters.mean()},
            {"std_nodes_in_clusters", a.nodes_in_clusters.stddev()},
        });
    }
    out << doc.dump(2) << '\n';
}

void write_scatter_csv(std::ostream& out, std::span<const ScatterPoint> points) {
    out << "d,p,sample,method,cluster_gap_db,defined,gap_db\n";
    for (const auto& pt : points) {
        out << pt.d << ',' << format_double(pt.p) << ',' << pt.sample << ',' << to_string(pt.method) << ','
            << format_double(pt.cluster_gap_db) << ',' << (pt.defined ? 1 : 0) << ','
            << (pt.gap_db ? format_double(*pt.gap_db) : "") << '\n';
    }
}

PlotMetric plot_metric_from_string(std::string_view name) {
    if (name == "visited")
        return PlotMetric::visited;
    if (name == "fraction")
        return PlotMetric::fraction_below;
    if (name == "max-growth")
        return PlotMetric::max_growth_db;
    if (name == "nodes-in-clusters")
        return PlotMetric::nodes_in_clusters;
    if (name == "extra-nodes")
        return PlotMetric::extra_nodes;
    throw InvalidParameter("unknown plot metric '" + std::string(name) + "'");
}

namespace {

double metric_value(const Aggregate& a, PlotMetric m) {
    switch (m) {
        case PlotMetric::visited:
            return a.visited.mean();
        case PlotMetric::fraction_below:
            return a.fraction_below();
        case PlotMetric::max_growth_db:
            return a.max_growth_db.mean();
        case PlotMetric::nodes_in_clusters:
            return a.nodes_in_clusters.mean();
        case PlotMetric::extra_nodes:
            return a.extra_nodes.mean();
    }
    return 0;
}

const char* metric_label(PlotMetric m) {
    switch (m) {
        case PlotMetric::visited:
            return "mean visited nodes";
        case PlotMetric::fraction_below:
            return "fraction below threshold";
        case PlotMetric::max_growth_db:
            return "mean max growth radius (dB)";
        case PlotMetric::nodes_in_clusters:
            return "mean nodes in clusters";
        case PlotMetric::extra_nodes:
            return "mean extra nodes";
    }
    return "";
}

}  // namespace

void write_svg_plot(std::ostream& out, std::span<const Aggregate> aggregates, PlotMetric metric) {
    constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 170, kTop = 30, kBottom = 50;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    // Series keyed by (method, p); points with non-positive values are skipped on the log axis.
    std::map<std::pair<std::string, double>, std::vector<std::pair<double, double>>> series;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& a : aggregates) {
        double y = metric_value(a, metric);
        auto& s = series[{std::string(to_string(a.method)), a.p}];
        if (!(y > 0))
            continue;
        s.emplace_back(a.d, y);
        xmin = std::min(xmin, double(a.d));
        xmax = std::max(xmax, double(a.d));
        ymin = std::min(ymin, std::log10(y));
        ymax = std::max(ymax, std::log10(y));
    }
    if (!(xmin <= xmax)) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax <= ymin)
        ymax = ymin + 1;
    if (xmax <= xmin)
        xmax = xmin + 1;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double ly) { return kTop + (1 - (ly - ymin) / (ymax - ymin)) * plot_h; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e) {
        out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + plot_w << "\" y1=\"" << py(e) << "\" y2=\"" << py(e)
            << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    std::vector<double> xs;
    for (const auto& a : aggregates)
        xs.push_back(a.d);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double x : xs)
        out << "<text x=\"" << px(x) << "\" y=\"" << kTop + plot_h + 16 << "\" text-anchor=\"middle\">" << x
            << "</text>\n";
    out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">d</text>\n";
    out << "<text x=\"16\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << kTop + plot_h / 2 << ")\">" << metric_label(metric) << "</text>\n";

    std::size_t idx = 0;
    for (const auto& [key, pts] : series) {
        const char* colour = palette[idx % std::size(palette)];
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i)
            out << (i ? " " : "") << px(pts[i].first) << ',' << py(std::log10(pts[i].second));
        out << "\"/>\n";
        double ly = kTop + 14 + 16 * static_cast<double>(idx);
        out << "<line x1=\"" << kWidth - kRight + 10 << "\" x2=\"" << kWidth - kRight + 30 << "\" y1=\"" << ly - 4
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kWidth - kRight + 34 << "\" y=\"" << ly << "\">" << key.first
            << " p=" << format_double(key.second) << "</text>\n";
        ++idx;
    }
    out << "</svg>\n";
}

}  // namespace ecgap
