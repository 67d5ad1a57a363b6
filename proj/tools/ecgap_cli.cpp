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

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ecgap/fit.hpp"
#include "ecgap/graph.hpp"
#include "ecgap/harness.hpp"

namespace {

using namespace ecgap;

// Opens FILE for writing, or stdout for "-".
class Output {
   public:
    explicit Output(const std::string& path) {
        if (path == "-")
            return;
        file_.open(path, std::ios::binary);
        if (!file_)
            throw std::runtime_error("cannot write " + path);
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

   private:
    std::ofstream file_;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return in;
}

struct SweepFlags {
    std::vector<int> distances;
    std::vector<double> probs;
    int rounds = 0;
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    double epsilon_max_db = kDefaultEpsilonMaxDb;
    std::vector<std::string> methods{"cluster", "bounded", "extra", "extra-cg"};
    int threads = 0;
    bool no_skip_empty = false;
    std::string graph_path;
    bool serial = false;
};

void add_sweep_flags(CLI::App* app, SweepFlags& f) {
    app->add_option("--distances", f.distances, "Odd code distances, comma separated")->delimiter(',');
    app->add_option("--probs", f.probs, "Physical error probabilities, comma separated")->delimiter(',');
    app->add_option("--rounds", f.rounds, "Measurement rounds (default: d)");
    app->add_option("--samples", f.samples, "Samples per (d, p) cell");
    app->add_option("--seed", f.seed, "Master seed");
    app->add_option("--epsilon-max-db", f.epsilon_max_db, "Early-stopping threshold in dB");
    app->add_option("--methods", f.methods, "cluster,bounded,extra,extra-cg")->delimiter(',');
    app->add_option("--threads", f.threads, "Worker threads (0 = runtime default)");
    app->add_flag("--serial", f.serial, "Use the single-threaded reference path");
    app->add_flag("--no-skip-empty", f.no_skip_empty, "Evaluate samples without detection events");
    app->add_option("--graph", f.graph_path, "Run one cell on a graph file instead of generated graphs");
}

SweepConfig make_config(const SweepFlags& f) {
    SweepConfig cfg;
    cfg.distances = f.distances;
    cfg.probs = f.probs;
    cfg.rounds = f.rounds;
    cfg.samples = f.samples;
    cfg.master_seed = f.seed;
    cfg.epsilon_max_db = f.epsilon_max_db;
    cfg.threads = f.threads;
    cfg.skip_empty_syndromes = !f.no_skip_empty;
    cfg.methods.clear();
    for (const auto& m : f.methods)
        cfg.methods.push_back(gap_kind_from_string(m));
    if (!f.graph_path.empty())
        cfg.graph = std::make_shared<const DecodingGraph>(load_graph(f.graph_path));
    return cfg;
}

Execution execution(const SweepFlags& f) {
    return f.serial ? Execution::serial : Execution::parallel;
}

int cmd_gen_graph(int d, int rounds, double p, const std::string& out) {
    DecodingGraph g = build_phenomenological(d, rounds > 0 ? rounds : d, p);
    if (out == "-")
        std::cout << to_text(g);
    else
        save_graph(g, out);
    std::cerr << "graph: " << g.num_detectors() << " detectors, " << g.num_edges() << " edges\n";
    return 0;
}

int cmd_sweep(const SweepFlags& f, const std::string& out, const std::string& format, const std::string& aggregate,
              const std::string& plot, const std::string& plot_metric) {
    SweepConfig cfg = make_config(f);
    PlotMetric metric = plot_metric_from_string(plot_metric);
    if (format != "csv" && format != "json")
        throw ValidationError("format must be csv or json");
    SweepOutput result = run_sweep(cfg, execution(f));
    Output o(out);
    if (format == "csv")
        write_csv(o.stream(), result.records);
    else
        write_json(o.stream(), result.records, result.aggregates, cfg);
    if (!aggregate.empty()) {
        Output a(aggregate);
        write_aggregates_csv(a.stream(), result.aggregates, cfg);
    }
    if (!plot.empty()) {
        Output s(plot);
        write_svg_plot(s.stream(), result.aggregates, metric);
    }
    return 0;
}

int cmd_consistency(const SweepFlags& f, const std::string& out) {
    SweepConfig cfg = make_config(f);
    ConsistencyReport report = run_consistency(cfg, execution(f), !out.empty());
    if (!out.empty()) {
        Output o(out);
        write_scatter_csv(o.stream(), report.points);
    }
    const Violations& v = report.violations;
    std::cout << "samples checked: " << report.samples_checked << '\n'
              << "bounded/cluster disagreement: " << v.bounded_agreement << '\n'
              << "extra above cluster gap: " << v.extra_upper << '\n'
              << "extra undefined below threshold: " << v.extra_complete << '\n'
              << "extra-cg below cluster gap: " << v.extra_cg_lower << '\n'
              << "extra-cg inexact below threshold: " << v.extra_cg_exact << '\n'
              << "growth radius above threshold/2: " << v.radius_cap << '\n';
    for (GapKind k : cfg.methods) {
        if (k == GapKind::cluster)
            continue;
        auto i = static_cast<std::size_t>(k);
        std::cout << to_string(k) << ": " << report.below_threshold[i] << " samples below threshold, "
                  << report.missed[i] << " missed\n";
    }
    std::cout << "total violations: " << v.total() << '\n';
    return v.total() == 0 ? 0 : 1;
}

double metric_of(const Aggregate& a, const std::string& metric) {
    if (metric == "visited")
        return a.visited.mean();
    if (metric == "fraction")
        return a.fraction_below();
    if (metric == "max-growth")
        return a.max_growth_db.mean();
    if (metric == "nodes-in-clusters")
        return a.nodes_in_clusters.mean();
    if (metric == "extra-nodes")
        return a.extra_nodes.mean();
    throw ValidationError("unknown metric '" + metric + "'");
}

int cmd_fit(const std::string& model, double dmin, const std::string& in_path, const std::string& out,
            std::string metric, const std::string& method, std::optional<double> p_filter, double epsilon_max_db) {
    if (model != "power" && model != "exp")
        throw ValidationError("model must be power or exp");
    if (metric.empty())
        metric = model == "power" ? "visited" : "fraction";
    auto in = open_input(in_path);
    auto records = read_csv(in);
    auto aggregates = aggregate_records(records, epsilon_max_db);

    std::map<std::pair<std::string, double>, std::vector<FitPoint>> series;
    for (const auto& a : aggregates) {
        std::string name(to_string(a.method));
        if (!method.empty() && name != method)
            continue;
        if (p_filter && a.p != *p_filter)
            continue;
        series[{name, a.p}].push_back(FitPoint{static_cast<double>(a.d), metric_of(a, metric)});
    }
    if (series.empty())
        throw ValidationError("no records match the requested filters");

    Output o(out);
    o.stream() << "method,p,model,metric,A,B,residual,points_used,points_dropped\n";
    int failures = 0;
    for (const auto& [key, pts] : series) {
        try {
            FitResult r = model == "power" ? fit_power_law(pts, dmin) : fit_exponential(pts);
            if (r.points_dropped)
                std::cerr << "warning: " << key.first << " p=" << format_double(key.second) << ": dropped "
                          << r.points_dropped << " point(s) with non-positive " << metric << '\n';
            o.stream() << key.first << ',' << format_double(key.second) << ',' << model << ',' << metric << ','
                       << format_double(r.A) << ',' << format_double(r.B) << ',' << format_double(r.residual)
                       << ',' << r.points_used << ',' << r.points_dropped << '\n';
        } catch (const InsufficientData& e) {
            std::cerr << "warning: " << key.first << " p=" << format_double(key.second) << ": " << e.what() << '\n';
            ++failures;
        }
    }
    return failures == static_cast<int>(series.size()) ? 1 : 0;
}

int cmd_switch_check(double threshold, const std::string& in_path, const std::string& method,
                     double epsilon_max_db) {
    auto in = open_input(in_path);
    auto records = read_csv(in);
    std::optional<GapKind> kind;
    if (!method.empty())
        kind = gap_kind_from_string(method);
    SwitchCheck r = switch_check(records, threshold, epsilon_max_db, kind);
    std::cout << "measured_rate=" << format_double(r.measured_rate) << " (" << r.count << '/' << r.n << ")"
              << " wilson95=[" << format_double(r.wilson_low) << ", " << format_double(r.wilson_high) << "]"
              << " threshold=" << format_double(r.user_threshold) << ' ' << (r.pass ? "PASS" : "FAIL") << '\n';
    return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Soft-output estimators for union-find decoding of surface codes"};
    app.require_subcommand(1);

    int gen_d = 3, gen_rounds = 0;
    double gen_p = 0.001;
    std::string gen_out = "-";
    auto* gen = app.add_subcommand("gen-graph", "Write a phenomenological rotated-code decoding graph");
    gen->add_option("--distance", gen_d, "Odd code distance")->required();
    gen->add_option("--rounds", gen_rounds, "Measurement rounds (default: d)");
    gen->add_option("--p", gen_p, "Physical error probability")->required();
    gen->add_option("--out", gen_out, "Output file ('-' for stdout)");

    SweepFlags sweep_flags;
    std::string sweep_out = "-", sweep_format = "csv", sweep_aggregate, sweep_plot, sweep_plot_metric = "visited";
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over distances, probabilities and methods");
    add_sweep_flags(sweep, sweep_flags);
    sweep->add_option("--out", sweep_out, "Per-sample output ('-' for stdout)");
    sweep->add_option("--format", sweep_format, "csv or json");
    sweep->add_option("--aggregate", sweep_aggregate, "Also write per-cell aggregates as CSV");
    sweep->add_option("--plot", sweep_plot, "Also write an SVG plot of the aggregates");
    sweep->add_option("--plot-metric", sweep_plot_metric,
                      "visited, fraction, max-growth, nodes-in-clusters or extra-nodes");

    SweepFlags cons_flags;
    cons_flags.methods = {"cluster", "bounded", "extra", "extra-cg"};
    std::string cons_out;
    auto* cons = app.add_subcommand("consistency", "Check the soft-output relations on every sample");
    add_sweep_flags(cons, cons_flags);
    cons->add_option("--out", cons_out, "Scatter dataset CSV");

    std::string fit_model = "power", fit_in, fit_out = "-", fit_metric, fit_method;
    double fit_dmin = 0, fit_eps = kDefaultEpsilonMaxDb;
    std::optional<double> fit_p;
    auto* fit = app.add_subcommand("fit", "Fit scaling laws to a sweep CSV");
    fit->add_option("--model", fit_model, "power or exp");
    fit->add_option("--dmin", fit_dmin, "Smallest distance used by the power-law fit");
    fit->add_option("--in", fit_in, "Sweep CSV")->required();
    fit->add_option("--out", fit_out, "Fit results CSV ('-' for stdout)");
    fit->add_option("--metric", fit_metric, "visited, fraction, max-growth, nodes-in-clusters or extra-nodes");
    fit->add_option("--method", fit_method, "Restrict to one method");
    fit->add_option("--p", fit_p, "Restrict to one probability");
    fit->add_option("--epsilon-max-db", fit_eps, "Threshold used by the fraction metric");

    double sc_threshold = 0, sc_eps = kDefaultEpsilonMaxDb;
    std::string sc_in, sc_method;
    auto* sc = app.add_subcommand("switch-check", "Compare a measured switching rate with a bound");
    sc->add_option("--threshold", sc_threshold, "Largest acceptable switching rate")->required();
    sc->add_option("--in", sc_in, "Sweep CSV")->required();
    sc->add_option("--method", sc_method, "Restrict to one method");
    sc->add_option("--epsilon-max-db", sc_eps, "Soft-output threshold in dB");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen)
            return cmd_gen_graph(gen_d, gen_rounds, gen_p, gen_out);
        if (*sweep)
            return cmd_sweep(sweep_flags, sweep_out, sweep_format, sweep_aggregate, sweep_plot, sweep_plot_metric);
        if (*cons)
            return cmd_consistency(cons_flags, cons_out);
        if (*fit)
            return cmd_fit(fit_model, fit_dmin, fit_in, fit_out, fit_metric, fit_method, fit_p, fit_eps);
        if (*sc)
            return cmd_switch_check(sc_threshold, sc_in, sc_method, sc_eps);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
