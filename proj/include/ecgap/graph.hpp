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

#ifndef ECGAP_GRAPH_HPP
#define ECGAP_GRAPH_HPP

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecgap {

/// Global weight scale: one natural-log unit is 2 * kWeightScale integer ticks.
inline constexpr std::int64_t kWeightScale = 1'000'000;

struct InvalidProbability : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& what);
    std::size_t line;
};

/// Edge or path weight held as an exact integer.
///
/// `scaled` is always even, so half of any edge weight is again an integer
/// number of ticks. All gap comparisons are done on `scaled`, never on the
/// floating-point natural-log value.
struct Weight {
    std::int64_t scaled = 0;

    static Weight from_nat(double w_nat);
    double nat() const { return static_cast<double>(scaled) / (2.0 * static_cast<double>(kWeightScale)); }
    double db() const;

    friend auto operator<=>(const Weight&, const Weight&) = default;
    friend Weight operator+(Weight a, Weight b) { return Weight{a.scaled + b.scaled}; }
    Weight& operator+=(Weight o) {
        scaled += o.scaled;
        return *this;
    }
};

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
    NodeId u;
    NodeId v;
    Weight weight;
    std::optional<double> prob;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
    NodeId neighbor;
    EdgeId edge;
};

struct DistanceParams {
    int distance;
    int rounds;
    double p;

    friend bool operator==(const DistanceParams&, const DistanceParams&) = default;
};

/// ln((1 - p) / p) as an exact scaled weight. Valid for 0 < p <= 0.5.
Weight weight_from_prob(double p);

double nat_to_db(double w_nat);
double db_to_nat(double db);

/// Decoding graph: detectors plus M >= 2 boundary nodes, all as ordinary node ids.
/// Immutable once built; share freely across threads.
class DecodingGraph {
   public:
    DecodingGraph(std::size_t num_nodes, std::vector<NodeId> boundaries);

    EdgeId add_edge(NodeId u, NodeId v, Weight w, std::optional<double> prob = std::nullopt);
    EdgeId add_edge(NodeId u, NodeId v, double prob);

    std::size_t num_nodes() const { return adjacency_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_detectors() const { return num_nodes() - boundaries_.size(); }
    const std::vector<NodeId>& boundaries() const { return boundaries_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    std::span<const Incidence> incident(NodeId n) const { return adjacency_[n]; }
    bool is_boundary(NodeId n) const { return is_boundary_[n] != 0; }
    /// Largest degree among detectors; boundaries are virtual and excluded.
    std::size_t max_detector_degree() const;
    bool connected() const;

    const std::optional<DistanceParams>& params() const { return params_; }
    void set_params(DistanceParams params) { params_ = params; }

    friend bool operator==(const DecodingGraph& a, const DecodingGraph& b) {
        return a.boundaries_ == b.boundaries_ && a.edges_ == b.edges_ && a.num_nodes() == b.num_nodes();
    }

   private:
    std::vector<NodeId> boundaries_;
    std::vector<std::uint8_t> is_boundary_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adjacency_;
    std::optional<DistanceParams> params_;
};

/// Matching graph of one error type of the rotated surface code under
/// phenomenological noise: rounds + 1 detector slices, data errors inside each
/// slice, measurement errors between consecutive slices. Data qubits in the
/// leftmost column attach to boundaries()[0], the rightmost to boundaries()[1].
/// Two boundary qubits sharing a check would give parallel half-edges; only
/// one half-edge per (check, boundary) is kept.
DecodingGraph build_phenomenological(int d, int rounds, double p);

/// Number of detectors in one slice of build_phenomenological.
inline std::size_t checks_per_slice(int d) { return static_cast<std::size_t>(d * d - 1) / 2; }

std::string to_text(const DecodingGraph& g);
DecodingGraph parse_graph(const std::string& text);
DecodingGraph load_graph(const std::filesystem::path& path);
void save_graph(const DecodingGraph& g, const std::filesystem::path& path);

}  // namespace ecgap

#endif  // ECGAP_GRAPH_HPP
