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

#ifndef ECGAP_DECODER_HPP
#define ECGAP_DECODER_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ecgap/graph.hpp"
#include "ecgap/sampler.hpp"
#include "ecgap/union_find.hpp"

namespace ecgap {

struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

/// Final partition produced by the union-find cluster decoder.
///
/// Sets are kept over every graph node. A node is "in a cluster" once it is
/// a detection event or an endpoint of a fully grown edge; everything else
/// is a singleton. Boundaries start as passive singletons and join the set
/// of any cluster that grows onto them.
struct ClusterState {
    DisjointSet sets;
    std::vector<std::uint8_t> in_cluster;
    std::vector<std::uint8_t> event;
    /// Covered length of each edge from its u side and its v side.
    std::vector<std::array<std::int64_t, 2>> coverage;
    std::vector<std::uint8_t> edge_grown;
    Weight radius_log;
    std::size_t covered_detectors = 0;
    std::size_t num_clusters = 0;
    std::size_t growth_steps = 0;
    std::size_t union_ops = 0;

    NodeId cluster_of(NodeId n) const { return sets.find(n); }
};

/// Correction as sorted edge ids.
struct Correction {
    std::vector<EdgeId> edges;
    friend bool operator==(const Correction&, const Correction&) = default;
};

/// Grows every odd, boundary-free cluster at the same rate, jumping straight
/// to the next edge-completion event, until all clusters are neutral or
/// touch a boundary. Simultaneous completions merge in ascending edge order.
ClusterState decode(const DecodingGraph& g, const Syndrome& s);

/// Peels a spanning forest of the grown edges of each cluster.
Correction peel(const DecodingGraph& g, const ClusterState& cs, const Syndrome& s);

Weight max_growth_radius(const ClusterState& cs);

std::size_t nodes_in_clusters(const ClusterState& cs);

}  // namespace ecgap

#endif  // ECGAP_DECODER_HPP
