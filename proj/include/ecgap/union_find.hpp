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

#ifndef ECGAP_UNION_FIND_HPP
#define ECGAP_UNION_FIND_HPP

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace ecgap {

/// Union by rank with path halving. On equal rank the lower root id wins,
/// so the resulting forest depends only on the sequence of unite() calls.
class DisjointSet {
   public:
    DisjointSet() = default;
    explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }

    std::size_t size() const { return parent_.size(); }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    std::uint32_t find(std::uint32_t x) const {
        while (parent_[x] != x)
            x = parent_[x];
        return x;
    }

    bool same(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }

    /// Returns the surviving root; a no-op when already joined.
    std::uint32_t unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return a;
        if (rank_[a] < rank_[b] || (rank_[a] == rank_[b] && b < a))
            std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b])
            ++rank_[a];
        return a;
    }

   private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
};

}  // namespace ecgap

#endif  // ECGAP_UNION_FIND_HPP
