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

#ifndef ECGAP_HARNESS_HPP
#define ECGAP_HARNESS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecgap/decoder.hpp"
#include "ecgap/graph.hpp"
#include "ecgap/softout.hpp"

namespace ecgap {

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::array<GapKind, 4> kAllMethods = {GapKind::cluster, GapKind::bounded, GapKind::extra,
                                                       GapKind::extra_cg};

struct SweepConfig {
    std::vector<int> distances;
    std::vector<double> probs;
    /// Rounds per distance; 0 means rounds = d.
    int rounds = 0;
    std::size_t samples = 1000;
    double epsilon_max_db = kDefaultEpsilonMaxDb;
    std::vector<GapKind> methods{kAllMethods.begin(), kAllMethods.end()};
    std::uint64_t master_seed = 0;
    bool skip_empty_syndromes = true;
    /// OpenMP worker count for the parallel path; 0 keeps the runtime default.
    int threads = 0;
    /// Externally supplied graph with edge probabilities. When set, distances
    /// and probs are ignored and a single cell is run on this graph.
    std::shared_ptr<const DecodingGraph> graph;
};

void validate(const SweepConfig& cfg);

/// Exact per-sample outcome, shared by every method evaluated on the sample.
struct SampleOutcome {
    std::uint64_t sample = 0;
    bool empty = false;
    Weight max_growth;
    std::size_t nodes_in_clusters = 0;
    std::array<std::optional<GapResult>, 4> gaps;

    const std::optional<GapResult>& gap(GapKind k) const { return gaps[static_cast<std::size_t>(k)]; }
};

struct Cell {
    int d = 0;
    double p = 0;
    std::shared_ptr<const DecodingGraph> graph;
};

/// Decodes one sample once and evaluates every configured method on the
/// resulting cluster state.
SampleOutcome evaluate_sample(const DecodingGraph& g, const SweepConfig& cfg, std::uint64_t sample_index);

enum class Execution { serial, parallel };

using CellSink = std::function<void(const Cell&, std::span<const SampleOutcome>)>;

/// Runs every (d, p) cell. Outcomes reach the sink in sample order, one cell
/// at a time, whatever the execution policy or worker count.
void run_cells(const SweepConfig& cfg, Execution exec, const CellSink& sink);

struct SweepRecord {
    int d = 0;
    double p = 0;
    std::uint64_t sample = 0;
    GapKind method = GapKind::cluster;
    bool defined = false;
    std::optional<double> gap_db;
    std::uint64_t visited_nodes = 0;
    std::uint64_t extra_nodes = 0;
    double max_growth_db = 0;
    std::uint64_t nodes_in_clusters = 0;

    friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

/// Single-pass mean and variance.
class RunningStats {
   public:
    void add(double x) {
        ++n_;
        double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double stddev() const { return n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1)) : 0.0; }

   private:
    std::size_t n_ = 0;
    double mean_ = 0;
    double m2_ = 0;
};

struct Aggregate {
    int d = 0;
    double p = 0;
    GapKind method = GapKind::cluster;
    std::size_t samples = 0;
    std::size_t empty_samples = 0;
    /// Denominator of the below-threshold fraction.
    std::size_t n = 0;
    std::size_t below = 0;
    RunningStats visited;
    RunningStats extra_nodes;
    RunningStats max_growth_db;
    RunningStats nodes_in_clusters;

    double fraction_below() const { return n ? static_cast<double>(below) / static_cast<double>(n) : 0.0; }
    double fraction_below_se() const {
        double f = fraction_below();
        return n ? std::sqrt(f * (1 - f) / static_cast<double>(n)) : 0.0;
    }
};

/// Rebuilds per-(d, p, method) aggregates from serialized records, in order of
/// first appearance. Records with nodes_in_clusters == 0 come from empty
/// syndromes and are left out of the visited statistics.
std::vector<Aggregate> aggregate_records(std::span<const SweepRecord> records,
                                         double epsilon_max_db = kDefaultEpsilonMaxDb);

struct SweepOutput {
    std::vector<SweepRecord> records;
    std::vector<Aggregate> aggregates;
};

SweepOutput run_sweep(const SweepConfig& cfg, Execution exec = Execution::parallel);

std::vector<SweepRecord> to_records(const Cell& cell, std::span<const SampleOutcome> outcomes,
                                    std::span<const GapKind> methods);

/// Folds one cell into per-method aggregates.
std::vector<Aggregate> aggregate_cell(const Cell& cell, std::span<const SampleOutcome> outcomes,
                                      const SweepConfig& cfg);

struct Violations {
    std::size_t bounded_agreement = 0;  // bounded == cluster iff cluster <= eps
    std::size_t extra_upper = 0;        // extra defined => extra <= cluster
    std::size_t extra_complete = 0;     // cluster <= eps => extra defined
    std::size_t extra_cg_lower = 0;     // extra-cg defined => cluster <= extra-cg
    std::size_t extra_cg_exact = 0;     // cluster <= eps => extra-cg == cluster
    std::size_t radius_cap = 0;         // extra growth radius <= eps / 2

    std::size_t total() const {
        return bounded_agreement + extra_upper + extra_complete + extra_cg_lower + extra_cg_exact + radius_cap;
    }
    Violations& operator+=(const Violations& o);
};

/// Exact integer checks of the soft-output relations on one sample.
Violations check_sample(const SampleOutcome& s, Weight epsilon_max);

struct ScatterPoint {
    int d = 0;
    double p = 0;
    std::uint64_t sample = 0;
    GapKind method = GapKind::bounded;
    double cluster_gap_db = 0;
    bool defined = false;
    std::optional<double> gap_db;
};

struct ConsistencyReport {
    std::vector<ScatterPoint> points;
    Violations violations;
    std::size_t samples_checked = 0;
    /// Samples with cluster gap <= eps, per method, and how many of them
    /// the method left undefined.
    std::array<std::size_t, 4> below_threshold{};
    std::array<std::size_t, 4> missed{};
};

ConsistencyReport run_consistency(const SweepConfig& cfg, Execution exec = Execution::parallel,
                                  bool collect_points = true);

struct SwitchCheck {
    double measured_rate = 0;
    double user_threshold = 0;
    bool pass = false;
    std::size_t count = 0;
    std::size_t n = 0;
    double wilson_low = 0;
    double wilson_high = 0;
};

/// Fraction of records whose gap is defined and <= epsilon_max, compared
/// against a user-supplied switching-rate bound.
SwitchCheck switch_check(std::span<const SweepRecord> records, double threshold,
                         double epsilon_max_db = kDefaultEpsilonMaxDb,
                         std::optional<GapKind> method = std::nullopt);

// Serialization.
inline constexpr const char* kCsvHeader =
    "d,p,sample,method,defined,gap_db,visited_nodes,extra_nodes,max_growth_db,nodes_in_clusters";

std::string format_double(double x);
void write_csv(std::ostream& out, std::span<const SweepRecord> records);
std::vector<SweepRecord> read_csv(std::istream& in);
void write_aggregates_csv(std::ostream& out, std::span<const Aggregate> aggregates, const SweepConfig& cfg);
void write_json(std::ostream& out, std::span<const SweepRecord> records, std::span<const Aggregate> aggregates,
                const SweepConfig& cfg);
void write_scatter_csv(std::ostream& out, std::span<const ScatterPoint> points);

enum class PlotMetric { visited, fraction_below, max_growth_db, nodes_in_clusters, extra_nodes };
PlotMetric plot_metric_from_string(std::string_view name);

/// Log-scale line chart, x = d, one polyline per (p, method) series.
void write_svg_plot(std::ostream& out, std::span<const Aggregate> aggregates, PlotMetric metric);

}  // namespace ecgap

#endif  // ECGAP_HARNESS_HPP
