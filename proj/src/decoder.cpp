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

#include "ecgap/decoder.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace ecgap {

ClusterState decode(const DecodingGraph& g, const Syndrome& s) {
    const std::size_t n_nodes = g.num_nodes();
    const std::size_t n_edges = g.num_edges();

    ClusterState cs;
    cs.sets = DisjointSet(n_nodes);
    cs.in_cluster.assign(n_nodes, 0);
    cs.event.assign(n_nodes, 0);
    cs.coverage.assign(n_edges, {0, 0});
    cs.edge_grown.assign(n_edges, 0);

    // Per-root bookkeeping, valid only at current roots.
    std::vector<std::uint8_t> parity(n_nodes, 0);
    std::vector<std::uint8_t> touches(n_nodes, 0);
    std::vector<std::int64_t> radius(n_nodes, 0);
    std::vector<std::vector<EdgeId>> frontier(n_nodes);
    for (NodeId b : g.boundaries())
        touches[b] = 1;

    auto open_node = [&](NodeId n) {
        cs.in_cluster[n] = 1;
        for (const auto& inc : g.incident(n))
            frontier[n].push_back(inc.edge);
    };

    std::vector<NodeId> active;
    for (NodeId n : s.events) {
        if (n >= n_nodes || g.is_boundary(n))
            throw InvalidParameter("syndrome contains invalid detector " + std::to_string(n));
        if (cs.event[n])
            throw InvalidParameter("syndrome lists detector " + std::to_string(n) + " twice");
        cs.event[n] = 1;
        parity[n] = 1;
        open_node(n);
        active.push_back(n);
    }

    auto is_active = [&](NodeId root) { return parity[root] && !touches[root]; };
    auto join = [&](NodeId a, NodeId b) {
        NodeId ra = cs.sets.find(a);
        NodeId rb = cs.sets.find(b);
        if (ra == rb)
            return;
        NodeId root = cs.sets.unite(ra, rb);
        NodeId other = root == ra ? rb : ra;
        ++cs.union_ops;
        parity[root] ^= parity[other];
        touches[root] |= touches[other];
        radius[root] = std::max(radius[root], radius[other]);
        if (frontier[root].size() < frontier[other].size())
            frontier[root].swap(frontier[other]);
        frontier[root].insert(frontier[root].end(), frontier[other].begin(), frontier[other].end());
        frontier[other].clear();
        frontier[other].shrink_to_fit();
    };

    std::vector<std::uint8_t> grow_side(n_edges, 0);
    std::vector<std::uint8_t> queued(n_nodes, 0);
    std::vector<EdgeId> touched;
    std::vector<EdgeId> completed;
    std::vector<NodeId> next_active;

    while (!active.empty()) {
        touched.clear();
        for (NodeId r : active) {
            auto& fr = frontier[r];
            for (std::size_t i = 0; i < fr.size();) {
                EdgeId e = fr[i];
                const Edge& edge = g.edge(e);
                NodeId ru = cs.sets.find(edge.u);
                NodeId rv = cs.sets.find(edge.v);
                if (cs.edge_grown[e] || ru == rv) {
                    fr[i] = fr.back();
                    fr.pop_back();
                    continue;
                }
                if (!grow_side[e])
                    touched.push_back(e);
                grow_side[e] |= ru == r ? 1 : 2;
                ++i;
            }
        }
        if (touched.empty())
            throw InvariantViolation("active cluster has no edge left to grow");

        std::int64_t delta = std::numeric_limits<std::int64_t>::max();
        for (EdgeId e : touched) {
            const auto& cov = cs.coverage[e];
            std::int64_t remaining = g.edge(e).weight.scaled - cov[0] - cov[1];
            std::int64_t t = std::popcount(grow_side[e]) == 2 ? (remaining + 1) / 2 : remaining;
            delta = std::min(delta, std::max<std::int64_t>(t, 0));
        }

        completed.clear();
        for (EdgeId e : touched) {
            auto& cov = cs.coverage[e];
            if (grow_side[e] & 1)
                cov[0] += delta;
            if (grow_side[e] & 2)
                cov[1] += delta;
            grow_side[e] = 0;
            if (cov[0] + cov[1] >= g.edge(e).weight.scaled)
                completed.push_back(e);
        }
        for (NodeId r : active) {
            radius[r] += delta;
            cs.radius_log.scaled = std::max(cs.radius_log.scaled, radius[r]);
        }
        ++cs.growth_steps;

        std::sort(completed.begin(), completed.end());
        for (EdgeId e : completed) {
            cs.edge_grown[e] = 1;
            const Edge& edge = g.edge(e);
            for (NodeId x : {edge.u, edge.v})
                if (!cs.in_cluster[x] && !g.is_boundary(x))
                    open_node(x);
            join(edge.u, edge.v);
        }

        next_active.clear();
        for (NodeId r : active) {
            NodeId root = cs.sets.find(r);
            if (!queued[root] && is_active(root)) {
                queued[root] = 1;
                next_active.push_back(root);
            }
        }
        for (NodeId r : next_active)
            queued[r] = 0;
        active.swap(next_active);
    }

    std::vector<std::uint8_t> seen_root(n_nodes, 0);
    for (NodeId n = 0; n < n_nodes; ++n) {
        if (!cs.in_cluster[n])
            continue;
        ++cs.covered_detectors;
        NodeId root = cs.sets.find(n);
        if (!seen_root[root]) {
            seen_root[root] = 1;
            ++cs.num_clusters;
        }
    }
    return cs;
}

Correction peel(const DecodingGraph& g, const ClusterState& cs, const Syndrome& s) {
    const std::size_t n_nodes = g.num_nodes();
    std::vector<std::uint8_t> defect(n_nodes, 0);
    for (NodeId n : s.events)
        defect[n] ^= 1;

    std::vector<std::uint8_t> visited(n_nodes, 0);
    std::vector<EdgeId> parent_edge(n_nodes, 0);
    std::vector<NodeId> order;
    std::vector<std::uint8_t> flipped(g.num_edges(), 0);

    auto peel_tree = [&](NodeId root) {
        order.clear();
        order.push_back(root);
        visited[root] = 1;
        for (std::size_t head = 0; head < order.size(); ++head) {
            NodeId x = order[head];
            for (const auto& inc : g.incident(x)) {
                if (!cs.edge_grown[inc.edge] || visited[inc.neighbor])
                    continue;
                visited[inc.neighbor] = 1;
                parent_edge[inc.neighbor] = inc.edge;
                order.push_back(inc.neighbor);
            }
        }
        for (std::size_t i = order.size(); i-- > 1;) {
            NodeId x = order[i];
            if (!defect[x] || g.is_boundary(x))
                continue;
            EdgeId e = parent_edge[x];
            flipped[e] ^= 1;
            defect[x] = 0;
            const Edge& edge = g.edge(e);
            defect[edge.u == x ? edge.v : edge.u] ^= 1;
        }
        if (defect[root] && !g.is_boundary(root))
            throw InvariantViolation("cluster rooted at " + std::to_string(root) + " has odd residual parity");
    };

    // Trees touching a boundary are rooted there so the boundary absorbs parity.
    for (NodeId b : g.boundaries())
        if (!visited[b])
            peel_tree(b);
    for (NodeId n = 0; n < n_nodes; ++n)
        if (cs.in_cluster[n] && !visited[n])
            peel_tree(n);

    Correction c;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
        if (flipped[e])
            c.edges.push_back(e);
    return c;
}

Weight max_growth_radius(const ClusterState& cs) {
    return cs.radius_log;
}

std::size_t nodes_in_clusters(const ClusterState& cs) {
    return cs.covered_detectors;
}

}  // namespace ecgap
