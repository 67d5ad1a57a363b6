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

#ifndef ECGAP_SOFTOUT_HPP
#define ECGAP_SOFTOUT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ecgap/decoder.hpp"
#include "ecgap/graph.hpp"

namespace ecgap {

/// Default early-stopping threshold in decibels.
inline constexpr double kDefaultEpsilonMaxDb = 20.0;

/// Threshold in exact weight units for a value given in decibels.
Weight epsilon_from_db(double db);

enum class GapKind { cluster, bounded, extra, extra_cg };

std::string_view to_string(GapKind kind);
GapKind gap_kind_from_string(std::string_view name);

struct GapResult {
    GapKind kind = GapKind::cluster;
    std::optional<Weight> value;
    /// Nodes settled by Dijkstra (cluster and bounded kinds).
    std::size_t visited_nodes = 0;
    /// Bare detectors newly covered by extra growth (extra kinds).
    std::size_t extra_nodes = 0;
    bool cluster_graph_invoked = false;
    /// Largest ball radius reached during extra growth.
    Weight growth_radius;
    std::size_t growth_passes = 0;

    bool defined() const { return value.has_value(); }
};

/// The quotient graph G' of a decoding graph by a cluster partition,
/// presented over the original node ids: nodes sharing a class are joined
/// at zero cost and every other edge keeps its weight.
///
/// Classes that hold a clustered node or a boundary are "origins"; every
/// other node is a bare detector in its own class.
class ContractedView {
   public:
    ContractedView(const DecodingGraph& g, const ClusterState& cs);

    /// Arbitrary partition: cluster_id[n] >= 0 groups nodes into a cluster,
    /// -1 leaves a detector bare. Unassigned boundaries get their own class.
    ContractedView(const DecodingGraph& g, const std::vector<std::int64_t>& cluster_id);

    const DecodingGraph& graph() const { return *graph_; }
    std::size_t num_origins() const { return members_.size(); }
    /// Origin index of a node, or -1 for a bare detector.
    std::int32_t origin_of(NodeId n) const { return origin_of_[n]; }
    const std::vector<NodeId>& members(std::size_t origin) const { return members_[origin]; }
    bool same_class(NodeId a, NodeId b) const {
        return a == b || (origin_of_[a] >= 0 && origin_of_[a] == origin_of_[b]);
    }
    Weight weight(EdgeId e) const {
        const Edge& edge = graph_->edge(e);
        return same_class(edge.u, edge.v) ? Weight{0} : edge.weight;
    }

   private:
    void build(const std::vector<std::int64_t>& cluster_id);

    const DecodingGraph* graph_;
    std::vector<std::int32_t> origin_of_;
    std::vector<std::vector<NodeId>> members_;
};

/// Edge of the cluster graph: two origins and the exact distance at which
/// their growing balls collided.
struct ClusterGraphEdge {
    std::uint32_t a;
    std::uint32_t b;
    Weight distance;
    friend bool operator==(const ClusterGraphEdge&, const ClusterGraphEdge&) = default;
};

struct ClusterGraph {
    std::size_t num_nodes = 0;
    std::vector<ClusterGraphEdge> edges;
};

/// Shortest boundaries()[0] -> boundaries()[1] distance on G'.
GapResult cluster_gap(const ContractedView& view);

/// Dijkstra from boundaries()[0] that stops as soon as the popped distance
/// exceeds epsilon_max.
GapResult bounded_cluster_gap(const ContractedView& view, Weight epsilon_max);

/// Grows every origin (decoder clusters and boundaries) at the same rate and
/// reports the growth at which the first two boundaries join one set; this is
/// the bottleneck distance over G' capped at epsilon_max.
GapResult extra_cluster_gap(const ContractedView& view, Weight epsilon_max);
GapResult extra_cluster_gap(const DecodingGraph& g, const ClusterState& cs, Weight epsilon_max);

/// Full growth to epsilon_max recording every pairwise collision, followed by
/// Dijkstra on the resulting cluster graph when the boundaries connected.
GapResult extra_cluster_gap_cg(const ContractedView& view, Weight epsilon_max);
GapResult extra_cluster_gap_cg(const DecodingGraph& g, const ClusterState& cs, Weight epsilon_max);

/// All pairwise collisions with distance <= epsilon_max.
ClusterGraph collect_cluster_graph(const ContractedView& view, Weight epsilon_max);

struct MultiBoundaryResult {
    /// Keyed by (i, j), i < j, indices into graph().boundaries().
    std::map<std::pair<std::size_t, std::size_t>, GapResult> pairs;
    std::size_t growth_passes = 0;
};

/// Extra growth with every boundary growing; one pass answers all pairs.
MultiBoundaryResult multi_boundary_extra_gap(const ContractedView& view, Weight epsilon_max);
MultiBoundaryResult multi_boundary_extra_gap(const DecodingGraph& g, const ClusterState& cs, Weight epsilon_max);

}  // namespace ecgap

#endif  // ECGAP_SOFTOUT_HPP
