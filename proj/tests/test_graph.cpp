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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "ecgap/graph.hpp"
#include "support/oracles.hpp"

namespace ecgap {
namespace {

// ln(999) and ln(9999) to 20 digits, evaluated offline at 40-digit precision.
constexpr double kLn999 = 6.9067547786485535186;
constexpr double kLn9999 = 9.2102403669758493777;
constexpr double kLn10 = 2.3025850929940456840;

TEST(Weight, FromProbMatchesNaturalLog) {
    Weight w = weight_from_prob(0.001);
    EXPECT_EQ(w.scaled, 2 * std::llround(kLn999 * 1e6));
    EXPECT_NEAR(w.nat(), kLn999, 1e-6);
}

TEST(Weight, SmallProbabilityAnchor) {
    Weight w = weight_from_prob(1e-4);
    EXPECT_NEAR(w.nat(), 9.2102, 1e-4);
    EXPECT_EQ(w.scaled, 18'420'480);
    EXPECT_NEAR(w.nat(), kLn9999, 1e-6);
}

TEST(Weight, HalfProbabilityIsZero) {
    EXPECT_EQ(weight_from_prob(0.5).scaled, 0);
}

TEST(Weight, ScaledIsAlwaysEven) {
    for (double p : {0.0001, 0.00123, 0.01, 0.1234567, 0.3, 0.49999})
        EXPECT_EQ(weight_from_prob(p).scaled % 2, 0) << p;
}

TEST(Weight, RejectsOutOfRangeProbability) {
    for (double p : {0.0, -0.1, 0.5000001, 1.0, std::nan("")})
        EXPECT_THROW(weight_from_prob(p), InvalidProbability) << p;
}

TEST(Weight, StrictlyDecreasingInProbability) {
    Weight prev = weight_from_prob(1e-6);
    for (int i = 1; i <= 500; ++i) {
        double p = 1e-6 + (0.5 - 1e-6) * i / 500.0;
        Weight w = weight_from_prob(p);
        EXPECT_LT(w, prev) << p;
        prev = w;
    }
}

TEST(Weight, NatRoundTripWithinHalfTick) {
    for (double x : {0.0, 1e-7, 0.3333333, 4.605170185988091, 17.25})
        EXPECT_LE(std::abs(Weight::from_nat(x).nat() - x), 1.0 / (2.0 * kWeightScale));
}

TEST(Decibel, ThresholdAnchor) {
    EXPECT_NEAR(nat_to_db(4.60517), 20.0, 1e-5);
    EXPECT_NEAR(db_to_nat(20.0), 2 * kLn10, 1e-12);
    EXPECT_EQ(nat_to_db(0.0), 0.0);
    EXPECT_NEAR(db_to_nat(10.0), kLn10, 1e-12);
}

TEST(Decibel, RoundTripOnZeroToHundred) {
    for (int i = 0; i <= 1000; ++i) {
        double db = 0.1 * i;
        double back = nat_to_db(db_to_nat(db));
        EXPECT_LE(std::abs(back - db), 1e-12 * std::max(1.0, db));
    }
}

TEST(Phenomenological, SmallCodeCounts) {
    DecodingGraph g = build_phenomenological(3, 1, 0.001);
    EXPECT_EQ(g.num_detectors(), 8u);
    EXPECT_EQ(g.num_nodes(), 10u);
    EXPECT_EQ(g.boundaries().size(), 2u);
    EXPECT_LE(g.max_detector_degree(), 6u);
    EXPECT_TRUE(g.connected());
    for (NodeId b : g.boundaries())
        EXPECT_FALSE(g.incident(b).empty());
}

TEST(Phenomenological, ShortestLogicalPathHasDistanceEdges) {
    for (double p : {0.001, 0.01, 0.2}) {
        DecodingGraph g = build_phenomenological(3, 1, p);
        auto [len, hops] = oracle::exhaustive_shortest(g, g.boundaries()[0], g.boundaries()[1]);
        EXPECT_EQ(hops, 3);
        EXPECT_EQ(len, 3 * weight_from_prob(p).scaled);
    }
}

TEST(Phenomenological, DetectorCountFormula) {
    EXPECT_EQ(build_phenomenological(5, 5, 0.01).num_detectors(), 72u);
    for (int d : {3, 5, 7, 9, 11}) {
        for (int rounds : {1, 2, d}) {
            DecodingGraph g = build_phenomenological(d, rounds, 0.01);
            EXPECT_EQ(g.num_detectors(), checks_per_slice(d) * static_cast<std::size_t>(rounds + 1));
            EXPECT_LE(g.max_detector_degree(), 6u);
            EXPECT_TRUE(g.connected());
        }
    }
}

TEST(Phenomenological, BoundaryAdjacencyGrowsLinearlyPerSlice) {
    for (int d : {3, 5, 7, 9, 11}) {
        DecodingGraph g = build_phenomenological(d, d, 0.01);
        for (NodeId b : g.boundaries()) {
            std::set<NodeId> adjacent;
            for (const auto& inc : g.incident(b))
                adjacent.insert(inc.neighbor);
            // One half-edge per boundary check per slice, (d + 1) / 2 of them.
            EXPECT_EQ(g.incident(b).size(), static_cast<std::size_t>((d + 1) / 2 * (d + 1)));
            EXPECT_EQ(adjacent.size(), g.incident(b).size());
        }
    }
}

TEST(Phenomenological, LogicalPathsHavePositiveWeight) {
    for (int d : {3, 5, 7}) {
        DecodingGraph g = build_phenomenological(d, d, 0.01);
        oracle::Partition none = oracle::make_partition(g, std::vector<std::int64_t>(g.num_nodes(), -1));
        EXPECT_EQ(oracle::shortest_gap(g, none), d * weight_from_prob(0.01).scaled);
    }
}

TEST(Phenomenological, NoParallelEdges) {
    for (int d : {3, 5, 7}) {
        DecodingGraph g = build_phenomenological(d, 2, 0.01);
        std::set<std::pair<NodeId, NodeId>> pairs;
        for (const Edge& e : g.edges())
            EXPECT_TRUE(pairs.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second);
    }
}

TEST(Phenomenological, Deterministic) {
    EXPECT_EQ(to_text(build_phenomenological(7, 3, 0.005)), to_text(build_phenomenological(7, 3, 0.005)));
}

TEST(Phenomenological, RejectsBadDistance) {
    EXPECT_THROW(build_phenomenological(4, 1, 0.01), InvalidParameter);
    EXPECT_THROW(build_phenomenological(1, 1, 0.01), InvalidParameter);
    EXPECT_THROW(build_phenomenological(3, 0, 0.01), InvalidParameter);
    EXPECT_THROW(build_phenomenological(3, 1, 0.0), InvalidProbability);
}

TEST(GraphFile, SaveLoadRoundTrip) {
    DecodingGraph g = build_phenomenological(3, 1, 0.001);
    auto path = std::filesystem::temp_directory_path() / "ecgap_roundtrip.graph";
    save_graph(g, path);
    DecodingGraph h = load_graph(path);
    std::filesystem::remove(path);
    EXPECT_EQ(g, h);
    EXPECT_EQ(h.boundaries(), g.boundaries());
    EXPECT_EQ(to_text(h), to_text(g));
    EXPECT_EQ(h.params(), g.params());
}

TEST(GraphFile, BoundaryOrderPreserved) {
    DecodingGraph g(4, {3, 0});
    g.add_edge(0, 1, Weight::from_nat(1.0));
    g.add_edge(1, 2, Weight::from_nat(1.0));
    g.add_edge(2, 3, Weight::from_nat(1.0));
    DecodingGraph h = parse_graph(to_text(g));
    EXPECT_EQ(h.boundaries(), (std::vector<NodeId>{3, 0}));
    EXPECT_EQ(g, h);
}

TEST(GraphFile, HandWrittenChain) {
    DecodingGraph g = parse_graph(
        "# chain b1 - 1 - 2 - b2\n"
        "graph v1 nodes=4 boundaries=0,3\n"
        "edge 0 1 w=1.5\n"
        "\n"
        "edge 1 2 w=2.25\n"
        "edge 2 3 p=0.25\n");
    ASSERT_EQ(g.num_edges(), 3u);
    EXPECT_EQ(g.edge(0).weight.scaled, 3'000'000);
    EXPECT_EQ(g.edge(1).weight.scaled, 4'500'000);
    EXPECT_EQ(g.edge(2).weight, weight_from_prob(0.25));
    EXPECT_FALSE(g.edge(0).prob.has_value());
    EXPECT_EQ(g.edge(2).prob, 0.25);
    EXPECT_EQ(g.num_detectors(), 2u);
}

TEST(GraphFile, ExplicitWeightsSurviveTextRoundTrip) {
    DecodingGraph g(3, {0, 2});
    g.add_edge(0, 1, Weight{123'456'788});
    g.add_edge(1, 2, Weight{2});
    EXPECT_EQ(parse_graph(to_text(g)), g);
}

std::size_t error_line(const std::string& text) {
    try {
        parse_graph(text);
    } catch (const ParseError& e) {
        return e.line;
    }
    return 0;
}

TEST(GraphFile, ErrorsNameTheLine) {
    EXPECT_EQ(error_line("graph v1 nodes=3 boundaries=0,2\nedge 0 1 w=1\nedge 1 7 w=1\n"), 3u);
    EXPECT_EQ(error_line("graph v1 nodes=3 boundaries=0,2\nedge 0 1 w=-1\nedge 1 2 w=1\n"), 2u);
    EXPECT_EQ(error_line("# only a comment\ngraph v2 nodes=3\n"), 2u);
    EXPECT_EQ(error_line("edge 0 1 w=1\n"), 1u);
    EXPECT_EQ(error_line("graph v1 nodes=3 boundaries=0,2\nedge 0 1 q=1\n"), 2u);
    EXPECT_EQ(error_line("graph v1 nodes=3 boundaries=0,2\nedge 0 1 w=1 p=0.1\n"), 2u);
    EXPECT_EQ(error_line("graph v1 nodes=3 boundaries=0,2\nedge 0 x w=1\n"), 2u);
    EXPECT_EQ(error_line("graph v1 nodes=3 boundaries=0,2\nedge 0 1 p=0.7\n"), 2u);
    EXPECT_EQ(error_line("graph v1 nodes=3 boundaries=0,9\n"), 1u);
    EXPECT_NE(error_line("graph v1 nodes=4 boundaries=0,3\nedge 0 1 w=1\nedge 2 3 w=1\n"), 0u);
    EXPECT_NE(error_line(""), 0u);
}

TEST(GraphFile, LoadMissingFileThrows) {
    EXPECT_THROW(load_graph("/nonexistent/ecgap.graph"), std::runtime_error);
}

TEST(DecodingGraph, RejectsMalformedEdges) {
    DecodingGraph g(3, {0, 2});
    EXPECT_THROW(g.add_edge(1, 1, Weight{2}), InvalidParameter);
    EXPECT_THROW(g.add_edge(1, 3, Weight{2}), InvalidParameter);
    EXPECT_THROW(g.add_edge(0, 1, Weight{-2}), InvalidParameter);
    EXPECT_THROW(DecodingGraph(3, {0}), InvalidParameter);
    EXPECT_THROW(DecodingGraph(3, {0, 0}), InvalidParameter);
}

}  // namespace
}  // namespace ecgap
