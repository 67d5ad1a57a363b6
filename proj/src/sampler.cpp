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

#include "ecgap/sampler.hpp"

#include <algorithm>
#include <iterator>
#include <random>

namespace ecgap {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_sample_seed(SeedSpec seed) {
    return splitmix64(seed.master_seed ^ splitmix64(seed.sample_index ^ 0x6a09e667f3bcc909ULL));
}

ErrorPattern sample_errors(const DecodingGraph& g, SeedSpec seed) {
    std::mt19937_64 rng(derive_sample_seed(seed));
    ErrorPattern out;
    const auto& edges = g.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (!edges[e].prob)
            throw MissingProbability("edge " + std::to_string(e) + " has no error probability");
        // 53 random bits mapped onto [0, 1).
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < *edges[e].prob)
            out.flipped_edges.push_back(static_cast<EdgeId>(e));
    }
    return out;
}

Syndrome syndrome_of(const DecodingGraph& g, const ErrorPattern& e) {
    std::vector<std::uint8_t> parity(g.num_nodes(), 0);
    for (EdgeId id : e.flipped_edges) {
        const auto& edge = g.edge(id);
        parity[edge.u] ^= 1;
        parity[edge.v] ^= 1;
    }
    Syndrome s;
    for (NodeId n = 0; n < g.num_nodes(); ++n)
        if (parity[n] && !g.is_boundary(n))
            s.events.push_back(n);
    return s;
}

ErrorPattern combine(const ErrorPattern& a, const ErrorPattern& b) {
    ErrorPattern out;
    std::set_symmetric_difference(a.flipped_edges.begin(), a.flipped_edges.end(), b.flipped_edges.begin(),
                                  b.flipped_edges.end(), std::back_inserter(out.flipped_edges));
    return out;
}

}  // namespace ecgap
