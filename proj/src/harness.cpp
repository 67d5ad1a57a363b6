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

#include "ecgap/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <map>
#include <tuple>

#include "ecgap/sampler.hpp"

namespace ecgap {

void validate(const SweepConfig& cfg) {
    if (cfg.samples < 1)
        throw ValidationError("samples must be >= 1");
    if (!(cfg.epsilon_max_db > 0) || !std::isfinite(cfg.epsilon_max_db))
        throw ValidationError("epsilon_max_db must be positive");
    if (cfg.methods.empty())
        throw ValidationError("at least one method is required");
    if (cfg.rounds < 0)
        throw ValidationError("rounds must be >= 1 (or 0 for rounds = d)");
    if (cfg.threads < 0)
        throw ValidationError("threads must be >= 0");
    if (cfg.graph)
        return;
    if (cfg.distances.empty() || cfg.probs.empty())
        throw ValidationError("need at least one distance and one probability");
    for (int d : cfg.distances)
        if (d < 3 || d % 2 == 0)
            throw ValidationError("distances must be odd and >= 3, got " + std::to_string(d));
    for (double p : cfg.probs)
        if (!(p > 0 && p <= 0.5))
            throw ValidationError("probabilities must lie in (0, 0.5], got " + std::to_string(p));
}

SampleOutcome evaluate_sample(const DecodingGraph& g, const SweepConfig& cfg, std::uint64_t sample_index) {
    SampleOutcome out;
    out.sample = sample_index;
    Syndrome s = syndrome_of(g, sample_errors(g, SeedSpec{cfg.master_seed, sample_index}));
    out.empty = s.empty();
    if (out.empty && cfg.skip_empty_syndromes)
        return out;

    ClusterState cs = decode(g, s);
    out.max_growth = max_growth_radius(cs);
    out.nodes_in_clusters = nodes_in_clusters(cs);
    ContractedView view(g, cs);
    Weight eps = epsilon_from_db(cfg.epsilon_max_db);
    for (GapKind k : cfg.methods) {
        auto& slot = out.gaps[static_cast<std::size_t>(k)];
        switch (k) {
            case GapKind::cluster:
                slot = cluster_gap(view);
                break;
            case GapKind::bounded:
                slot = bounded_cluster_gap(view, eps);
                break;
            case GapKind::extra:
                slot = extra_cluster_gap(view, eps);
                break;
            case GapKind::extra_cg:
                slot = extra_cluster_gap_cg(view, eps);
                break;
        }
    }
    return out;
}

namespace {

std::vector<Cell> make_cells(const SweepConfig& cfg) {
    std::vector<Cell> cells;
    if (cfg.graph) {
        Cell c;
        c.graph = cfg.graph;
        if (const auto& params = cfg.graph->params()) {
            c.d = params->distance;
            c.p = params->p;
        }
        cells.push_back(c);
        return cells;
    }
    for (int d : cfg.distances) {
        for (double p : cfg.probs) {
            int rounds = cfg.rounds > 0 ? cfg.rounds : d;
            cells.push_back(Cell{d, p, std::make_shared<const DecodingGraph>(build_phenomenological(d, rounds, p))});
        }
    }
    return cells;
}

}  // namespace

void run_cells(const SweepConfig& cfg, Execution exec, const CellSink& sink) {
    validate(cfg);
    std::vector<SampleOutcome> outcomes;
    for (const Cell& cell : make_cells(cfg)) {
        const DecodingGraph& g = *cell.graph;
        const auto n = static_cast<std::int64_t>(cfg.samples);
        outcomes.assign(cfg.samples, SampleOutcome{});
        if (exec == Execution::serial) {
            for (std::int64_t i = 0; i < n; ++i)
                outcomes[i] = evaluate_sample(g, cfg, static_cast<std::uint64_t>(i));
        } else {
            int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
            // Each sample owns its slot, so the schedule cannot change the output.
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
            for (std::int64_t i = 0; i < n; ++i)
                outcomes[i] = evaluate_sample(g, cfg, static_cast<std::uint64_t>(i));
        }
        sink(cell, outcomes);
    }
}

std::vector<SweepRecord> to_records(const Cell& cell, std::span<const SampleOutcome> outcomes,
                                    std::span<const GapKind> methods) {
    std::vector<SweepRecord> out;
    for (const auto& s : outcomes) {
        for (GapKind k : methods) {
            const auto& gap = s.gap(k);
            if (!gap)
                continue;
            SweepRecord r;
            r.d = cell.d;
            r.p = cell.p;
            r.sample = s.sample;
            r.method = k;
            r.defined = gap->defined();
            if (gap->value)
                r.gap_db = gap->value->db();
            r.visited_nodes = gap->visited_nodes;
            r.extra_nodes = gap->extra_nodes;
            r.max_growth_db = s.max_growth.db();
            r.nodes_in_clusters = s.nodes_in_clusters;
            out.push_back(r);
        }
    }
    return out;
}

std::vector<Aggregate> aggregate_cell(const Cell& cell, std::span<const SampleOutcome> outcomes,
                                      const SweepConfig& cfg) {
    Weight eps = epsilon_from_db(cfg.epsilon_max_db);
    std::vector<Aggregate> out;
    for (GapKind k : cfg.methods) {
        Aggregate a;
        a.d = cell.d;
        a.p = cell.p;
        a.method = k;
        a.samples = outcomes.size();
        for (const auto& s : outcomes) {
            if (s.empty)
                ++a.empty_samples;
            const auto& gap = s.gap(k);
            if (!gap)
                continue;
            ++a.n;
            if (gap->value && *gap->value <= eps)
                ++a.below;
            if (!s.empty)
                a.visited.add(static_cast<double>(gap->visited_nodes));
            a.extra_nodes.add(static_cast<double>(gap->extra_nodes));
            a.max_growth_db.add(s.max_growth.db());
            a.nodes_in_clusters.add(static_cast<double>(s.nodes_in_clusters));
        }
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<Aggregate> aggregate_records(std::span<const SweepRecord> records, double epsilon_max_db) {
    std::vector<Aggregate> out;
    std::map<std::tuple<int, double, GapKind>, std::size_t> index;
    for (const auto& r : records) {
        auto [it, inserted] = index.try_emplace({r.d, r.p, r.method}, out.size());
        if (inserted) {
            Aggregate a;
            a.d = r.d;
            a.p = r.p;
            a.method = r.method;
            out.push_back(a);
        }
        Aggregate& a = out[it->second];
        const bool empty = r.nodes_in_clusters == 0;
        ++a.samples;
        ++a.n;
        if (empty)
            ++a.empty_samples;
        if (r.defined && r.gap_db && *r.gap_db <= epsilon_max_db)
            ++a.below;
        if (!empty)
            a.visited.add(static_cast<double>(r.visited_nodes));
        a.extra_nodes.add(static_cast<double>(r.extra_nodes));
        a.max_growth_db.add(r.max_growth_db);
        a.nodes_in_clusters.add(static_cast<double>(r.nodes_in_clusters));
    }
    return out;
}

SweepOutput run_sweep(const SweepConfig& cfg, Execution exec) {
    SweepOutput out;
    run_cells(cfg, exec, [&](const Cell& cell, std::span<const SampleOutcome> outcomes) {
        auto records = to_records(cell, outcomes, cfg.methods);
        out.records.insert(out.records.end(), records.begin(), records.end());
        auto aggs = aggregate_cell(cell, outcomes, cfg);
        out.aggregates.insert(out.aggregates.end(), aggs.begin(), aggs.end());
    });
    return out;
}

Violations& Violations::operator+=(const Violations& o) {
    bounded_agreement += o.bounded_agreement;
    extra_upper += o.extra_upper;
    extra_complete += o.extra_complete;
    extra_cg_lower += o.extra_cg_lower;
    extra_cg_exact += o.extra_cg_exact;
    radius_cap += o.radius_cap;
    return *this;
}

Violations check_sample(const SampleOutcome& s, Weight eps) {
    Violations v;
    const auto& cluster = s.gap(GapKind::cluster);
    const auto& bounded = s.gap(GapKind::bounded);
    const auto& extra = s.gap(GapKind::extra);
    const auto& extra_cg = s.gap(GapKind::extra_cg);

    for (const auto* g : {&extra, &extra_cg})
        if (*g && 2 * (*g)->growth_radius.scaled > eps.scaled)
            ++v.radius_cap;

    if (!cluster || !cluster->value)
        return v;
    const Weight gc = *cluster->value;
    const bool within = gc <= eps;

    if (bounded) {
        bool ok = within ? (bounded->value && *bounded->value == gc) : !bounded->value;
        if (!ok)
            ++v.bounded_agreement;
    }
    if (extra) {
        if (extra->value && *extra->value > gc)
            ++v.extra_upper;
        if (within && !extra->value)
            ++v.extra_complete;
    }
    if (extra_cg) {
        if (extra_cg->value && *extra_cg->value < gc)
            ++v.extra_cg_lower;
        if (within && !(extra_cg->value && *extra_cg->value == gc))
            ++v.extra_cg_exact;
    }
    return v;
}

ConsistencyReport run_consistency(const SweepConfig& cfg, Execution exec, bool collect_points) {
    validate(cfg);
    bool has_cluster = std::find(cfg.methods.begin(), cfg.methods.end(), GapKind::cluster) != cfg.methods.end();
    if (!has_cluster || cfg.methods.size() < 2)
        throw ValidationError("consistency needs the cluster method plus at least one other");
    Weight eps = epsilon_from_db(cfg.epsilon_max_db);

    ConsistencyReport report;
    run_cells(cfg, exec, [&](const Cell& cell, std::span<const SampleOutcome> outcomes) {
        for (const auto& s : outcomes) {
            const auto& cluster = s.gap(GapKind::cluster);
            if (!cluster)
                continue;
            ++report.samples_checked;
            report.violations += check_sample(s, eps);
            const bool within = cluster->value && *cluster->value <= eps;
            for (GapKind k : cfg.methods) {
                if (k == GapKind::cluster)
                    continue;
                const auto& other = s.gap(k);
                auto idx = static_cast<std::size_t>(k);
                if (within) {
                    ++report.below_threshold[idx];
                    if (!other->value)
                        ++report.missed[idx];
                }
                if (collect_points) {
                    ScatterPoint pt;
                    pt.d = cell.d;
                    pt.p = cell.p;
                    pt.sample = s.sample;
                    pt.method = k;
                    pt.cluster_gap_db = cluster->value->db();
                    pt.defined = other->defined();
                    if (other->value)
                        pt.gap_db = other->value->db();
                    report.points.push_back(pt);
                }
            }
        }
    });
    return report;
}

SwitchCheck switch_check(std::span<const SweepRecord> records, double threshold, double epsilon_max_db,
                         std::optional<GapKind> method) {
    if (records.empty())
        throw ValidationError("switch check needs at least one record");
    SwitchCheck out;
    out.user_threshold = threshold;
    for (const auto& r : records) {
        if (method && r.method != *method)
            continue;
        ++out.n;
        if (r.defined && r.gap_db && *r.gap_db <= epsilon_max_db)
            ++out.count;
    }
    if (out.n == 0)
        throw ValidationError("no records match the requested method");
    const double n = static_cast<double>(out.n);
    out.measured_rate = static_cast<double>(out.count) / n;
    out.pass = out.measured_rate <= threshold;

    // 95% Wilson score interval.
    const double z = 1.959963984540054;
    const double p = out.measured_rate;
    const double denom = 1 + z * z / n;
    const double centre = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    out.wilson_low = std::max(0.0, centre - half);
    out.wilson_high = std::min(1.0, centre + half);
    return out;
}

}  // namespace ecgap
