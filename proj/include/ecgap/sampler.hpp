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

#ifndef ECGAP_SAMPLER_HPP
#define ECGAP_SAMPLER_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ecgap/graph.hpp"

namespace ecgap {

struct MissingProbability : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Per-sample generator state is a pure function of both fields.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t sample_index = 0;
};

/// Sorted, duplicate-free edge ids.
struct ErrorPattern {
    std::vector<EdgeId> flipped_edges;
    friend bool operator==(const ErrorPattern&, const ErrorPattern&) = default;
};

/// Sorted detection events; never contains a boundary node.
struct Syndrome {
    std::vector<NodeId> events;
    bool empty() const { return events.empty(); }
    friend bool operator==(const Syndrome&, const Syndrome&) = default;
};

/// 64-bit seed for one sample, derived counter-style from (master_seed, sample_index).
std::uint64_t derive_sample_seed(SeedSpec seed);

ErrorPattern sample_errors(const DecodingGraph& g, SeedSpec seed);

Syndrome syndrome_of(const DecodingGraph& g, const ErrorPattern& e);

/// Symmetric difference of two error patterns.
ErrorPattern combine(const ErrorPattern& a, const ErrorPattern& b);

}  // namespace ecgap

#endif  // ECGAP_SAMPLER_HPP
