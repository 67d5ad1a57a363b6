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

// Slow, independent reference computations used as test oracles. Nothing
// here reuses the library's search or growth code; partitions are taken
// straight from a cluster-id vector.

#ifndef ECGAP_TESTS_ORACLES_HPP
#define ECGAP_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ecgap/decoder.hpp"
#include "ecgap/graph.hpp"

namespace ecgap::oracle {

inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

inline std::optional<std::int64_t> ticks(const std::optional<Weight>& w) {
    if (!w)
        return std::nullopt;
    return w->scaled;
}

/// Class label per node: equal labels are one node of G'. Bare detectors and
/// unassigned boundaries get unique labels. origin[n] tells whether n's class
/// is an origin (a cluster or a boundary).
struct Partition {
    std::vector<std::int64_t> label;
    std::vector<bool> origin;
};

inline Partition make_partition(const DecodingGraph& g, const std::vector<std::int64_t>& cluster_id) {
    Partition p;
    const std::size_t n = g.num_nodes();
    p.label.resize(n);
    p.origin.assign(n, false);
    std::int64_t next = 1'000'000'000;
    for (std::size_t v = 0; v < n; ++v) {
        if (cluster_id[v] >= 0) {
            p.label[v] = cluster_id[v];
            p.origin[v] = true;
        } else {
            p.label[v] = next++;
            p.origin[v] = g.is_boundary(static_cast<NodeId>(v));
        }
    }
    return p;
}

/// Cluster ids as the decoder defines them: roots of clustered nodes, and a
/// boundary joins the class of any cluster that grew onto it.
inline std::vector<std::int64_t> cluster_ids_of(const DecodingGraph& g, const ClusterState& cs) {
    std::vector<std::int64_t> id(g.num_nodes(), -1);
    std::set<NodeId> clustered_roots;
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        if (cs.in_cluster[v])
            clustered_roots.insert(cs.sets.find(v));
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        NodeId r = cs.sets.find(v);
        if (cs.in_cluster[v] || (g.is_boundary(v) && clustered_roots.count(r)))
            id[v] = r;
    }
    return id;
}

/// Bellman-Ford over G' with explicit zero-cost moves between members of a
/// class. Returns all distances from the class of src.
inline std::vector<std::int64_t> bellman_ford(const DecodingGraph& g, const Partition& p, NodeId src) {
    const std::size_t n = g.num_nodes();
    std::vector<std::int64_t> dist(n, kInf);
    for (std::size_t v = 0; v < n; ++v)
        if (p.label[v] == p.label[src])
            dist[v] = 0;
    for (std::size_t iter = 0; iter < n + 1; ++iter) {
        bool changed = false;
        for (const Edge& e : g.edges()) {
            std::int64_t w = p.label[e.u] == p.label[e.v] ? 0 : e.weight.scaled;
            if (dist[e.u] + w < dist[e.v]) {
                dist[e.v] = dist[e.u] + w;
                changed = true;
            }
            if (dist[e.v] + w < dist[e.u]) {
                dist[e.u] = dist[e.v] + w;
                changed = true;
            }
        }
        // Class members are one node.
        std::map<std::int64_t, std::int64_t> best;
        for (std::size_t v = 0; v < n; ++v) {
            auto [it, ins] = best.try_emplace(p.label[v], dist[v]);
            if (!ins)
                it->second = std::min(it->second, dist[v]);
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (best[p.label[v]] < dist[v]) {
                dist[v] = best[p.label[v]];
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    return dist;
}

inline std::int64_t shortest_gap(const DecodingGraph& g, const Partition& p) {
    return bellman_ford(g, p, g.boundaries()[0])[g.boundaries()[1]];
}

/// Origin classes in order of first appearance, and each node's origin index.
struct Origins {
    std::vector<std::int64_t> labels;
    std::vector<int> of_node;
};

inline Origins origins_of(const DecodingGraph& g, const Partition& p) {
    Origins o;
    o.of_node.assign(g.num_nodes(), -1);
    std::map<std::int64_t, int> index;
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        if (!p.origin[v])
            continue;
        auto [it, ins] = index.try_emplace(p.label[v], static_cast<int>(o.labels.size()));
        if (ins)
            o.labels.push_back(p.label[v]);
        o.of_node[v] = it->second;
    }
    return o;
}

/// Pairwise G' distances between origins along paths whose interior nodes
/// are all bare detectors. hop[a][b] = kInf when no such path exists.
inline std::vector<std::vector<std::int64_t>> hop_distances(const DecodingGraph& g, const Partition& p,
                                                            const Origins& o) {
    const std::size_t k = o.labels.size();
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<std::int64_t>> hop(k, std::vector<std::int64_t>(k, kInf));
    for (std::size_t a = 0; a < k; ++a) {
        // Label-correcting search; only a's members and bare nodes may relay.
        std::vector<std::int64_t> dist(n, kInf);
        for (std::size_t v = 0; v < n; ++v)
            if (o.of_node[v] == static_cast<int>(a))
                dist[v] = 0;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const Edge& e : g.edges()) {
                for (auto [x, y] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
                    if (dist[x] >= kInf)
                        continue;
                    bool relay = o.of_node[x] < 0 || o.of_node[x] == static_cast<int>(a);
                    if (!relay)
                        continue;
                    std::int64_t w = p.label[x] == p.label[y] ? 0 : e.weight.scaled;
                    if (dist[x] + w < dist[y]) {
                        dist[y] = dist[x] + w;
                        changed = true;
                    }
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            int b = o.of_node[v];
            if (b >= 0 && b != static_cast<int>(a))
                hop[a][b] = std::min(hop[a][b], dist[v]);
        }
    }
    return hop;
}

/// Smallest t such that origins s and t connect using hops <= t, or nullopt
/// if that exceeds cap. Brute force over candidate thresholds with a BFS each.
inline std::optional<std::int64_t> minimax(const std::vector<std::vector<std::int64_t>>& hop, int s, int t,
                                           std::int64_t cap) {
    if (s == t)
        return 0;
    std::set<std::int64_t> candidates;
    for (const auto& row : hop)
        for (std::int64_t h : row)
            if (h <= cap)
                candidates.insert(h);
    const std::size_t k = hop.size();
    for (std::int64_t thr : candidates) {
        std::vector<bool> seen(k, false);
        std::vector<int> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (std::size_t y = 0; y < k; ++y) {
                if (!seen[y] && hop[x][y] <= thr) {
                    seen[y] = true;
                    stack.push_back(static_cast<int>(y));
                }
            }
        }
        if (seen[t])
            return thr;
    }
    return std::nullopt;
}

/// Shortest s-t distance using only hops <= cap, provided s and t connect
/// at all under that restriction (Floyd-Warshall).
inline std::optional<std::int64_t> capped_hop_shortest(const std::vector<std::vector<std::int64_t>>& hop, int s,
                                                       int t, std::int64_t cap) {
    const std::size_t k = hop.size();
    std::vector<std::vector<std::int64_t>> d(k, std::vector<std::int64_t>(k, kInf));
    for (std::size_t i = 0; i < k; ++i) {
        d[i][i] = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (i != j && hop[i][j] <= cap)
                d[i][j] = hop[i][j];
    }
    for (std::size_t m = 0; m < k; ++m)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (d[i][m] + d[m][j] < d[i][j])
                    d[i][j] = d[i][m] + d[m][j];
    if (d[s][t] >= kInf)
        return std::nullopt;
    return d[s][t];
}

/// Random connected graph: a random spanning tree plus extra edges, weights
/// drawn as even tick counts (occasionally zero). Boundaries are placed at
/// random node ids.
inline DecodingGraph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t num_boundaries,
                                  double extra_edge_factor = 0.6) {
    std::vector<NodeId> ids(n);
    for (std::size_t i = 0; i < n; ++i)
        ids[i] = static_cast<NodeId>(i);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<NodeId> boundaries(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(num_boundaries));
    DecodingGraph g(n, boundaries);

    std::uniform_int_distribution<std::int64_t> ticks(0, 6'000'000);
    std::bernoulli_distribution zero(0.05);
    auto weight = [&] { return Weight{zero(rng) ? 0 : 2 * ticks(rng)}; };

    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        g.add_edge(ids[i], ids[pick(rng)], weight());
    }
    std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(n - 1));
    auto extra = static_cast<std::size_t>(extra_edge_factor * static_cast<double>(n));
    for (std::size_t i = 0; i < extra; ++i) {
        NodeId u = any(rng), v = any(rng);
        if (u != v)
            g.add_edge(u, v, weight());
    }
    return g;
}

/// Random partition: each node joins one of k clusters with probability
/// density, else stays bare (-1).
inline std::vector<std::int64_t> random_partition(std::mt19937_64& rng, std::size_t n, int k, double density) {
    std::vector<std::int64_t> id(n, -1);
    std::bernoulli_distribution in(density);
    std::uniform_int_distribution<int> which(0, std::max(0, k - 1));
    for (std::size_t v = 0; v < n; ++v)
        if (k > 0 && in(rng))
            id[v] = which(rng);
    return id;
}

/// Length of the lightest b1 -> b2 simple path by exhaustive DFS, and the
/// fewest edges among lightest paths. Only for tiny graphs.
inline std::pair<std::int64_t, int> exhaustive_shortest(const DecodingGraph& g, NodeId s, NodeId t) {
    std::pair<std::int64_t, int> best{kInf, 0};
    std::vector<bool> on_path(g.num_nodes(), false);
    auto dfs = [&](auto&& self, NodeId x, std::int64_t len, int hops) -> void {
        if (len > best.first)
            return;
        if (x == t) {
            if (len < best.first || (len == best.first && hops < best.second))
                best = {len, hops};
            return;
        }
        on_path[x] = true;
        for (const auto& inc : g.incident(x))
            if (!on_path[inc.neighbor])
                self(self, inc.neighbor, len + g.edge(inc.edge).weight.scaled, hops + 1);
        on_path[x] = false;
    };
    dfs(dfs, s, 0, 0);
    return best;
}

}  // namespace ecgap::oracle

#endif  // ECGAP_TESTS_ORACLES_HPP
