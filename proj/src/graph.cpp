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

#include "ecgap/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ecgap {

ParseError::ParseError(std::size_t line_, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {
}

Weight Weight::from_nat(double w_nat) {
    if (!std::isfinite(w_nat))
        throw InvalidParameter("weight must be finite");
    return Weight{2 * std::llround(w_nat * static_cast<double>(kWeightScale))};
}

double Weight::db() const {
    return nat_to_db(nat());
}

Weight weight_from_prob(double p) {
    if (!(p > 0.0 && p <= 0.5))
        throw InvalidProbability("error probability must lie in (0, 0.5], got " + std::to_string(p));
    return Weight::from_nat(std::log((1.0 - p) / p));
}

double nat_to_db(double w_nat) {
    return 10.0 * w_nat / std::numbers::ln10;
}

double db_to_nat(double db) {
    return db * std::numbers::ln10 / 10.0;
}

DecodingGraph::DecodingGraph(std::size_t num_nodes, std::vector<NodeId> boundaries)
    : boundaries_(std::move(boundaries)), is_boundary_(num_nodes, 0), adjacency_(num_nodes) {
    if (boundaries_.size() < 2)
        throw InvalidParameter("a decoding graph needs at least two boundary nodes");
    for (NodeId b : boundaries_) {
        if (b >= num_nodes)
            throw InvalidParameter("boundary id " + std::to_string(b) + " out of range");
        if (is_boundary_[b])
            throw InvalidParameter("boundary id " + std::to_string(b) + " listed twice");
        is_boundary_[b] = 1;
    }
}

EdgeId DecodingGraph::add_edge(NodeId u, NodeId v, Weight w, std::optional<double> prob) {
    if (u >= num_nodes() || v >= num_nodes())
        throw InvalidParameter("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") references a missing node");
    if (u == v)
        throw InvalidParameter("self-loop at node " + std::to_string(u));
    if (w.scaled < 0)
        throw InvalidParameter("negative edge weight");
    auto id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{u, v, w, prob});
    adjacency_[u].push_back(Incidence{v, id});
    adjacency_[v].push_back(Incidence{u, id});
    return id;
}

EdgeId DecodingGraph::add_edge(NodeId u, NodeId v, double prob) {
    return add_edge(u, v, weight_from_prob(prob), prob);
}

std::size_t DecodingGraph::max_detector_degree() const {
    std::size_t best = 0;
    for (NodeId n = 0; n < num_nodes(); ++n)
        if (!is_boundary(n))
            best = std::max(best, adjacency_[n].size());
    return best;
}

bool DecodingGraph::connected() const {
    if (num_nodes() == 0)
        return true;
    std::vector<std::uint8_t> seen(num_nodes(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        for (const auto& inc : adjacency_[n]) {
            if (!seen[inc.neighbor]) {
                seen[inc.neighbor] = 1;
                ++count;
                stack.push_back(inc.neighbor);
            }
        }
    }
    return count == num_nodes();
}

DecodingGraph build_phenomenological(int d, int rounds, double p) {
    if (d < 3 || d % 2 == 0)
        throw InvalidParameter("code distance must be odd and >= 3, got " + std::to_string(d));
    if (rounds < 1)
        throw InvalidParameter("rounds must be >= 1, got " + std::to_string(rounds));
    Weight w = weight_from_prob(p);

    // Checks sit on plaquette corners (r, c) with 0 <= r <= d, 1 <= c <= d - 1
    // and r + c odd; this type has its weight-two checks on the top and bottom
    // rows, so the left and right data columns are the open boundaries.
    std::vector<int> check_index((d + 1) * (d + 1), -1);
    int num_checks = 0;
    for (int r = 0; r <= d; ++r)
        for (int c = 1; c <= d - 1; ++c)
            if ((r + c) % 2 == 1)
                check_index[r * (d + 1) + c] = num_checks++;

    auto slices = static_cast<std::size_t>(rounds) + 1;
    std::size_t num_det = slices * static_cast<std::size_t>(num_checks);
    auto b1 = static_cast<NodeId>(num_det);
    auto b2 = static_cast<NodeId>(num_det + 1);
    DecodingGraph g(num_det + 2, {b1, b2});

    auto plaquette = [&](int r, int c) -> int {
        if (r < 0 || r > d || c < 1 || c > d - 1)
            return -1;
        return check_index[r * (d + 1) + c];
    };

    std::vector<std::uint8_t> has_half_edge(2 * static_cast<std::size_t>(num_checks), 0);
    for (std::size_t t = 0; t < slices; ++t) {
        auto base = static_cast<NodeId>(t * num_checks);
        std::fill(has_half_edge.begin(), has_half_edge.end(), 0);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                int a, b;
                if ((i + j) % 2 == 0) {
                    a = plaquette(i, j + 1);
                    b = plaquette(i + 1, j);
                } else {
                    a = plaquette(i, j);
                    b = plaquette(i + 1, j + 1);
                }
                if (a >= 0 && b >= 0) {
                    g.add_edge(base + a, base + b, w, p);
                } else {
                    int only = a >= 0 ? a : b;
                    int side = j == 0 ? 0 : 1;
                    if (!has_half_edge[2 * only + side]++)
                        g.add_edge(base + only, side == 0 ? b1 : b2, w, p);
                }
            }
        }
        if (t + 1 < slices)
            for (int k = 0; k < num_checks; ++k)
                g.add_edge(base + k, base + num_checks + k, w, p);
    }
    g.set_params(DistanceParams{d, rounds, p});
    return g;
}

namespace {

std::string format_probability(double p) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, p);
    return std::string(buf, res.ptr);
}

// Weights are whole multiples of 1 / kWeightScale nat, so six decimals are exact.
std::string format_nat(Weight w) {
    std::int64_t ticks = w.scaled / 2;
    std::ostringstream os;
    os << ticks / kWeightScale << '.';
    std::string frac = std::to_string(ticks % kWeightScale);
    os << std::string(6 - frac.size(), '0') << frac;
    return os.str();
}

template <typename T>
T parse_number(std::string_view s, std::size_t line, const char* what) {
    T value{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError(line, std::string("malformed ") + what + " '" + std::string(s) + "'");
    return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

constexpr std::string_view kParamsComment = "# rotated surface code";

// Restores generator parameters from the comment written by to_text.
void read_params(DecodingGraph& g, const std::vector<std::string_view>& tokens, std::size_t line) {
    DistanceParams params{};
    int seen = 0;
    for (std::string_view tok : tokens) {
        if (tok.starts_with("d=")) {
            params.distance = parse_number<int>(tok.substr(2), line, "distance");
            seen |= 1;
        } else if (tok.starts_with("rounds=")) {
            params.rounds = parse_number<int>(tok.substr(7), line, "rounds");
            seen |= 2;
        } else if (tok.starts_with("p=")) {
            params.p = parse_number<double>(tok.substr(2), line, "probability");
            seen |= 4;
        }
    }
    if (seen == 7)
        g.set_params(params);
}

}  // namespace

std::string to_text(const DecodingGraph& g) {
    std::ostringstream os;
    os << "graph v1 nodes=" << g.num_nodes() << " boundaries=";
    for (std::size_t i = 0; i < g.boundaries().size(); ++i)
        os << (i ? "," : "") << g.boundaries()[i];
    os << '\n';
    if (const auto& params = g.params())
        os << kParamsComment << " d=" << params->distance << " rounds=" << params->rounds
           << " p=" << format_probability(params->p) << '\n';
    for (const auto& e : g.edges()) {
        os << "edge " << e.u << ' ' << e.v << ' ';
        if (e.prob)
            os << "p=" << format_probability(*e.prob);
        else
            os << "w=" << format_nat(e.weight);
        os << '\n';
    }
    return os.str();
}

DecodingGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::optional<DecodingGraph> g;
    while (std::getline(in, raw)) {
        ++line_no;
        auto tokens = split_ws(raw);
        if (g && raw.starts_with(kParamsComment)) {
            read_params(*g, tokens, line_no);
            continue;
        }
        if (tokens.empty() || tokens[0].starts_with('#'))
            continue;
        if (!g) {
            if (tokens.size() != 4 || tokens[0] != "graph" || tokens[1] != "v1" ||
                !tokens[2].starts_with("nodes=") || !tokens[3].starts_with("boundaries="))
                throw ParseError(line_no, "expected 'graph v1 nodes=<N> boundaries=<ids>' header");
            auto n = parse_number<std::size_t>(tokens[2].substr(6), line_no, "node count");
            std::vector<NodeId> boundaries;
            std::string_view list = tokens[3].substr(11);
            while (!list.empty()) {
                auto comma = list.find(',');
                boundaries.push_back(parse_number<NodeId>(list.substr(0, comma), line_no, "boundary id"));
                list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
            }
            try {
                g.emplace(n, std::move(boundaries));
            } catch (const InvalidParameter& e) {
                throw ParseError(line_no, e.what());
            }
            continue;
        }
        if (tokens.size() != 4 || tokens[0] != "edge")
            throw ParseError(line_no, "expected 'edge <u> <v> w=<weight>|p=<prob>'");
        auto u = parse_number<NodeId>(tokens[1], line_no, "node id");
        auto v = parse_number<NodeId>(tokens[2], line_no, "node id");
        if (u >= g->num_nodes() || v >= g->num_nodes())
            throw ParseError(line_no, "edge references node outside 0.." + std::to_string(g->num_nodes() - 1));
        try {
            if (tokens[3].starts_with("p=")) {
                double p = parse_number<double>(tokens[3].substr(2), line_no, "probability");
                g->add_edge(u, v, p);
            } else if (tokens[3].starts_with("w=")) {
                double w = parse_number<double>(tokens[3].substr(2), line_no, "weight");
                if (w < 0)
                    throw ParseError(line_no, "negative weight");
                g->add_edge(u, v, Weight::from_nat(w));
            } else {
                throw ParseError(line_no, "edge needs exactly one of w= or p=");
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (!g)
        throw ParseError(std::max<std::size_t>(line_no, 1), "missing graph header");
    if (!g->connected())
        throw ParseError(line_no, "graph is not connected");
    return std::move(*g);
}

DecodingGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

void save_graph(const DecodingGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << to_text(g);
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ecgap
