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

#include "ecgap/softout.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "ecgap/union_find.hpp"

namespace ecgap {

Weight epsilon_from_db(double db) {
    if (!(db >= 0.0))
        throw InvalidParameter("epsilon_max must be non-negative");
    return Weight::from_nat(db_to_nat(db));
}

std::string_view to_string(GapKind kind) {
    switch (kind) {
        case GapKind::cluster:
            return "cluster";
        case GapKind::bounded:
            return "bounded";
        case GapKind::extra:
            return "extra";
        case GapKind::extra_cg:
            return "extra-cg";
    }
    return "?";
}

GapKind gap_kind_from_string(std::string_view name) {
    if (name == "cluster")
        return GapKind::cluster;
    if (name == "bounded")
        return GapKind::bounded;
    if (name == "extra")
        return GapKind::extra;
    if (name == "extra-cg" || name == "extra_cg")
        return GapKind::extra_cg;
    throw InvalidParameter("unknown method '" + std::string(name) + "'");
}

ContractedView::ContractedView(const DecodingGraph& g, const ClusterState& cs) : graph_(&g) {
    std::vector<std::int64_t> cluster_id(g.num_nodes(), -1);
    for (NodeId n = 0; n < g.num_nodes(); ++n)
        if (cs.in_cluster[n] || g.is_boundary(n))
            cluster_id[n] = cs.sets.find(n);
    build(cluster_id);
}

ContractedView::ContractedView(const DecodingGraph& g, const std::vector<std::int64_t>& cluster_id) : graph_(&g) {
    if (cluster_id.size() != g.num_nodes())
        throw InvalidParameter("partition size does not match the graph");
    std::vector<std::int64_t> ids = cluster_id;
    std::int64_t fresh = static_cast<std::int64_t>(*std::max_element(ids.begin(), ids.end())) + 1;
    for (NodeId b : g.boundaries())
        if (ids[b] < 0)
            ids[b] = fresh++;
    build(ids);
}

void ContractedView::build(const std::vector<std::int64_t>& cluster_id) {
    const std::size_t n = graph_->num_nodes();
    origin_of_.assign(n, -1);
    std::unordered_map<std::int64_t, std::int32_t> index;
    for (NodeId v = 0; v < n; ++v) {
        if (cluster_id[v] < 0)
            continue;
        auto [it, inserted] = index.try_emplace(cluster_id[v], static_cast<std::int32_t>(members_.size()));
        if (inserted)
            members_.emplace_back();
        origin_of_[v] = it->second;
        members_[it->second].push_back(v);
    }
}

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

// Dijkstra over G' from the first boundary. Reaching any node of an origin
// class reaches the whole class at the same distance.
GapResult boundary_dijkstra(const ContractedView& view, std::optional<Weight> cap, GapKind kind) {
    const DecodingGraph& g = view.graph();
    const NodeId source = g.boundaries()[0];
    const NodeId target = g.boundaries()[1];

    GapResult out;
    out.kind = kind;

    std::vector<std::int64_t> dist(g.num_nodes(), kInf);
    std::vector<std::uint8_t> settled(g.num_nodes(), 0);
    std::vector<std::uint8_t> expanded(view.num_origins(), 0);
    using Item = std::pair<std::int64_t, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;

    dist[source] = 0;
    queue.emplace(0, source);
    while (!queue.empty()) {
        auto [d, x] = queue.top();
        if (cap && d > cap->scaled)
            break;
        queue.pop();
        if (settled[x] || d != dist[x])
            continue;
        settled[x] = 1;
        ++out.visited_nodes;
        if (x == target) {
            out.value = Weight{d};
            break;
        }
        if (std::int32_t o = view.origin_of(x); o >= 0 && !expanded[o]) {
            expanded[o] = 1;
            for (NodeId m : view.members(o)) {
                if (d < dist[m]) {
                    dist[m] = d;
                    queue.emplace(d, m);
                }
            }
        }
        for (const auto& inc : g.incident(x)) {
            std::int64_t nd = d + view.weight(inc.edge).scaled;
            if (nd < dist[inc.neighbor]) {
                dist[inc.neighbor] = nd;
                queue.emplace(nd, inc.neighbor);
            }
        }
    }
    return out;
}

// Simultaneous growth of balls around every origin class.
//
// Each origin keeps its own distance label on every bare detector within
// half the cap, so that a collision between two origins is found at their
// exact G' hop distance even when a third origin covers the meeting region
// first. A label at distance d is settled at growth epsilon = 2d; a collision
// through edge (u, v) between origins X at u and Y at v happens at
// epsilon = d_X(u) + w(u, v) + d_Y(v).
class ExtraGrowth {
   public:
    ExtraGrowth(const ContractedView& view, Weight cap)
        : view_(view), cap_(cap.scaled), head_(view.graph().num_nodes(), kNone), origin_sets_(view.num_origins()) {}

    struct Collision {
        std::uint32_t a;
        std::uint32_t b;
        std::int64_t epsilon;
    };

    /// Processes growth events in order. on_collision(c) is called for every
    /// collision between two origins not yet in one set, before they merge;
    /// returning true stops the growth.
    template <typename OnCollision>
    void run(OnCollision&& on_collision, bool record_pairs) {
        ++passes_;
        seed();
        while (!queue_.empty()) {
            Event ev = queue_.top();
            queue_.pop();
            if (ev.kind == kLabel) {
                settle_label(ev.a, ev.b, ev.dist);
                continue;
            }
            if (record_pairs) {
                std::uint64_t key = (static_cast<std::uint64_t>(ev.a) << 32) | ev.b;
                pairs_.try_emplace(key, ev.key);
            }
            if (origin_sets_.same(ev.a, ev.b))
                continue;
            if (on_collision(Collision{ev.a, ev.b, ev.key}))
                return;
            origin_sets_.unite(ev.a, ev.b);
        }
    }

    DisjointSet& origin_sets() { return origin_sets_; }
    std::size_t covered() const { return covered_; }
    std::int64_t max_radius() const { return max_radius_; }
    std::size_t passes() const { return passes_; }

    ClusterGraph cluster_graph() const {
        ClusterGraph cg;
        cg.num_nodes = view_.num_origins();
        for (const auto& [key, eps] : pairs_)
            cg.edges.push_back({static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key), Weight{eps}});
        std::sort(cg.edges.begin(), cg.edges.end(), [](const auto& x, const auto& y) {
            return std::tie(x.a, x.b) < std::tie(y.a, y.b);
        });
        return cg;
    }

   private:
    static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
    static constexpr std::uint8_t kLabel = 0;
    static constexpr std::uint8_t kCollision = 1;

    struct Event {
        std::int64_t key;
        std::uint8_t kind;
        std::uint32_t a;
        std::uint32_t b;
        std::int64_t dist;
        bool operator>(const Event& o) const {
            return std::tie(key, kind, a, b) > std::tie(o.key, o.kind, o.a, o.b);
        }
    };

    struct Label {
        std::uint32_t origin;
        std::int64_t dist;
        std::uint32_t next;
    };

    bool has_label(NodeId n, std::uint32_t origin) const {
        for (std::uint32_t i = head_[n]; i != kNone; i = pool_[i].next)
            if (pool_[i].origin == origin)
                return true;
        return false;
    }

    void push_collision(std::uint32_t x, std::uint32_t y, std::int64_t eps, std::int64_t now) {
        // A candidate below the current growth is dominated by a collision of
        // the same pair that has already been processed.
        if (eps > cap_ || eps < now)
            return;
        if (x > y)
            std::swap(x, y);
        queue_.push(Event{eps, kCollision, x, y, 0});
    }

    void push_label(std::uint32_t origin, NodeId n, std::int64_t d) {
        if (2 * d <= cap_)
            queue_.push(Event{2 * d, kLabel, origin, n, d});
    }

    void seed() {
        const DecodingGraph& g = view_.graph();
        for (std::uint32_t x = 0; x < view_.num_origins(); ++x) {
            for (NodeId u : view_.members(x)) {
                for (const auto& inc : g.incident(u)) {
                    std::int32_t y = view_.origin_of(inc.neighbor);
                    std::int64_t w = view_.weight(inc.edge).scaled;
                    if (y == static_cast<std::int32_t>(x))
                        continue;
                    if (y >= 0)
                        push_collision(x, static_cast<std::uint32_t>(y), w, 0);
                    else
                        push_label(x, inc.neighbor, w);
                }
            }
        }
    }

    void settle_label(std::uint32_t x, NodeId v, std::int64_t d) {
        if (has_label(v, x))
            return;
        if (head_[v] == kNone)
            ++covered_;
        pool_.push_back(Label{x, d, head_[v]});
        head_[v] = static_cast<std::uint32_t>(pool_.size() - 1);
        max_radius_ = std::max(max_radius_, d);

        const std::int64_t now = 2 * d;
        for (const auto& inc : view_.graph().incident(v)) {
            NodeId y = inc.neighbor;
            std::int64_t w = view_.weight(inc.edge).scaled;
            std::int32_t oy = view_.origin_of(y);
            if (oy >= 0) {
                if (static_cast<std::uint32_t>(oy) != x)
                    push_collision(x, static_cast<std::uint32_t>(oy), d + w, now);
                continue;
            }
            bool reached = false;
            for (std::uint32_t i = head_[y]; i != kNone; i = pool_[i].next) {
                if (pool_[i].origin == x)
                    reached = true;
                else
                    push_collision(x, pool_[i].origin, d + w + pool_[i].dist, now);
            }
            if (!reached)
                push_label(x, y, d + w);
        }
    }

    const ContractedView& view_;
    std::int64_t cap_;
    std::vector<std::uint32_t> head_;
    std::vector<Label> pool_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
    DisjointSet origin_sets_;
    std::unordered_map<std::uint64_t, std::int64_t> pairs_;
    std::size_t covered_ = 0;
    std::int64_t max_radius_ = 0;
    std::size_t passes_ = 0;
};

std::optional<std::int64_t> cluster_graph_distance(const ClusterGraph& cg, std::uint32_t source, std::uint32_t target) {
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> adj(cg.num_nodes);
    for (const auto& e : cg.edges) {
        adj[e.a].emplace_back(e.b, e.distance.scaled);
        adj[e.b].emplace_back(e.a, e.distance.scaled);
    }
    std::vector<std::int64_t> dist(cg.num_nodes, kInf);
    using Item = std::pair<std::int64_t, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0;
    queue.emplace(0, source);
    while (!queue.empty()) {
        auto [d, x] = queue.top();
        queue.pop();
        if (d != dist[x])
            continue;
        if (x == target)
            return d;
        for (auto [y, w] : adj[x]) {
            if (d + w < dist[y]) {
                dist[y] = d + w;
                queue.emplace(d + w, y);
            }
        }
    }
    return std::nullopt;
}

std::uint32_t boundary_origin(const ContractedView& view, std::size_t i) {
    return static_cast<std::uint32_t>(view.origin_of(view.graph().boundaries()[i]));
}

}  // namespace

GapResult cluster_gap(const ContractedView& view) {
    return boundary_dijkstra(view, std::nullopt, GapKind::cluster);
}

GapResult bounded_cluster_gap(const ContractedView& view, Weight epsilon_max) {
    if (epsilon_max.scaled < 0)
        throw InvalidParameter("epsilon_max must be non-negative");
    return boundary_dijkstra(view, epsilon_max, GapKind::bounded);
}

GapResult extra_cluster_gap(const ContractedView& view, Weight epsilon_max) {
    GapResult out;
    out.kind = GapKind::extra;
    const std::uint32_t b1 = boundary_origin(view, 0);
    const std::uint32_t b2 = boundary_origin(view, 1);
    if (b1 == b2) {
        out.value = Weight{0};
        return out;
    }
    ExtraGrowth growth(view, epsilon_max);
    auto& sets = growth.origin_sets();
    growth.run(
        [&](const ExtraGrowth::Collision& c) {
            std::uint32_t ra = sets.find(c.a);
            std::uint32_t rb = sets.find(c.b);
            std::uint32_t r1 = sets.find(b1);
            std::uint32_t r2 = sets.find(b2);
            if ((ra == r1 && rb == r2) || (ra == r2 && rb == r1)) {
                out.value = Weight{c.epsilon};
                return true;
            }
            return false;
        },
        false);
    out.extra_nodes = growth.covered();
    out.growth_radius = Weight{growth.max_radius()};
    out.growth_passes = growth.passes();
    return out;
}

GapResult extra_cluster_gap(const DecodingGraph& g, const ClusterState& cs, Weight epsilon_max) {
    return extra_cluster_gap(ContractedView(g, cs), epsilon_max);
}

GapResult extra_cluster_gap_cg(const ContractedView& view, Weight epsilon_max) {
    GapResult out;
    out.kind = GapKind::extra_cg;
    const std::uint32_t b1 = boundary_origin(view, 0);
    const std::uint32_t b2 = boundary_origin(view, 1);
    if (b1 == b2) {
        out.value = Weight{0};
        out.cluster_graph_invoked = true;
        return out;
    }
    ExtraGrowth growth(view, epsilon_max);
    growth.run([](const ExtraGrowth::Collision&) { return false; }, true);
    out.extra_nodes = growth.covered();
    out.growth_radius = Weight{growth.max_radius()};
    out.growth_passes = growth.passes();
    if (!growth.origin_sets().same(b1, b2))
        return out;
    out.cluster_graph_invoked = true;
    if (auto d = cluster_graph_distance(growth.cluster_graph(), b1, b2))
        out.value = Weight{*d};
    return out;
}

GapResult extra_cluster_gap_cg(const DecodingGraph& g, const ClusterState& cs, Weight epsilon_max) {
    return extra_cluster_gap_cg(ContractedView(g, cs), epsilon_max);
}

ClusterGraph collect_cluster_graph(const ContractedView& view, Weight epsilon_max) {
    ExtraGrowth growth(view, epsilon_max);
    growth.run([](const ExtraGrowth::Collision&) { return false; }, true);
    return growth.cluster_graph();
}

MultiBoundaryResult multi_boundary_extra_gap(const ContractedView& view, Weight epsilon_max) {
    const auto& boundaries = view.graph().boundaries();
    const std::size_t m = boundaries.size();
    MultiBoundaryResult out;

    // Boundaries currently in each origin set, keyed by set root.
    std::vector<std::vector<std::size_t>> held(view.num_origins());
    for (std::size_t i = 0; i < m; ++i)
        held[boundary_origin(view, i)].push_back(i);

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            GapResult r;
            r.kind = GapKind::extra;
            if (boundary_origin(view, i) == boundary_origin(view, j))
                r.value = Weight{0};
            out.pairs.emplace(std::pair{i, j}, r);
        }
    }

    ExtraGrowth growth(view, epsilon_max);
    auto& sets = growth.origin_sets();
    growth.run(
        [&](const ExtraGrowth::Collision& c) {
            std::uint32_t ra = sets.find(c.a);
            std::uint32_t rb = sets.find(c.b);
            for (std::size_t i : held[ra]) {
                for (std::size_t j : held[rb]) {
                    auto& r = out.pairs.at({std::min(i, j), std::max(i, j)});
                    if (!r.value)
                        r.value = Weight{c.epsilon};
                }
            }
            std::uint32_t root = sets.unite(ra, rb);
            std::uint32_t other = root == ra ? rb : ra;
            held[root].insert(held[root].end(), held[other].begin(), held[other].end());
            held[other].clear();
            return false;
        },
        false);

    out.growth_passes = growth.passes();
    for (auto& [key, r] : out.pairs) {
        r.extra_nodes = growth.covered();
        r.growth_radius = Weight{growth.max_radius()};
        r.growth_passes = growth.passes();
    }
    return out;
}

MultiBoundaryResult multi_boundary_extra_gap(const DecodingGraph& g, const ClusterState& cs, Weight epsilon_max) {
    return multi_boundary_extra_gap(ContractedView(g, cs), epsilon_max);
}

}  // namespace ecgap
