#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "qcut/errors.hpp"
#include "qcut/graph.hpp"

namespace qcut {

/// One piece of a chain decomposition. Vertices are a contiguous ascending
/// range of global ids; the local graph relabels them to 0..k-1. Piece i>0
/// starts at the vertex piece i-1 ends with, so shared_prev is always local 0
/// and shared_next always local k-1 when present.
struct SubgraphSpec {
    std::vector<Vertex> global_ids;
    Graph local_graph{0};
    std::optional<Vertex> shared_prev;
    std::optional<Vertex> shared_next;

    std::size_t size() const { return global_ids.size(); }
};

struct PartitionResult {
    std::vector<SubgraphSpec> subgraphs;
    std::vector<Edge> inter_edges;  // global ids, endpoints in no common piece
};

/// How interval lengths are chosen. kBalanced spreads vertices as evenly as
/// possible; kTailRemainder gives every piece floor(n/M) vertices and dumps
/// the remainder on the last one (CLI name "paper-exact").
enum class PartitionMode { kBalanced, kTailRemainder };

/// Subgraph over the given global vertex ids (ascending, distinct); keeps
/// exactly the edges with both endpoints in the set.
inline Graph induced_subgraph(const Graph& g, const std::vector<Vertex>& ids) {
    std::vector<std::uint32_t> local(g.n(), UINT32_MAX);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] >= g.n()) throw config_error("induced subgraph id out of range");
        if (i > 0 && ids[i] <= ids[i - 1]) throw config_error("induced subgraph ids must be ascending");
        local[ids[i]] = static_cast<std::uint32_t>(i);
    }
    Graph sub(ids.size());
    for (const Edge& e : g.edges())
        if (local[e.u] != UINT32_MAX && local[e.v] != UINT32_MAX)
            sub.add_edge(local[e.u], local[e.v], e.w);
    return sub;
}

namespace detail {

/// Inclusive vertex intervals [a_i, b_i] with b_i = a_{i+1} (one shared
/// vertex per seam) covering 0..n-1.
inline std::vector<std::pair<Vertex, Vertex>> chain_intervals(std::size_t n, int m,
                                                              PartitionMode mode) {
    if (m < 1) throw config_error("subgraph count must be positive");
    if (n == 0) throw config_error("cannot partition an empty graph");
    const std::size_t M = static_cast<std::size_t>(m);
    std::vector<std::pair<Vertex, Vertex>> iv;
    if (M == 1) {
        iv.emplace_back(0, static_cast<Vertex>(n - 1));
        return iv;
    }
    if (n < M + 1)
        throw config_error("need at least " + std::to_string(M + 1) + " vertices for " +
                           std::to_string(M) + " chained subgraphs, got " + std::to_string(n));

    // spans[i] = b_i - a_i; every span must stay >= 1 so each piece has >= 2
    // vertices and consecutive pieces share exactly one.
    std::vector<std::size_t> spans(M);
    const std::size_t total = n - 1;
    if (mode == PartitionMode::kTailRemainder) {
        const std::size_t s = n / M - 1;
        if (s < 1)
            throw config_error("tail-remainder split needs n >= 2*M, got n=" + std::to_string(n) +
                               " M=" + std::to_string(M));
        for (std::size_t i = 0; i + 1 < M; ++i) spans[i] = s;
        spans[M - 1] = total - (M - 1) * s;
    } else {
        const std::size_t s = (total + M - 1) / M;  // ceil
        if ((M - 1) * s <= total - 1) {
            // uniform stride, last piece takes what is left
            for (std::size_t i = 0; i + 1 < M; ++i) spans[i] = s;
            spans[M - 1] = total - (M - 1) * s;
        } else {
            // stride would starve the tail; spread floor/ceil instead
            const std::size_t q = total / M, r = total % M;
            for (std::size_t i = 0; i < M; ++i) spans[i] = q + (i < r ? 1 : 0);
        }
    }

    Vertex a = 0;
    for (std::size_t i = 0; i < M; ++i) {
        const Vertex b = a + static_cast<Vertex>(spans[i]);
        iv.emplace_back(a, b);
        a = b;
    }
    return iv;
}

} // namespace detail

/// Split g into m chained subgraphs. Consecutive pieces overlap in exactly one
/// vertex; edges crossing piece boundaries land in inter_edges untouched.
/// qubit_cap > 0 rejects splits whose largest piece would not fit on that many
/// qubits and names the smallest m that would.
inline PartitionResult partition(const Graph& g, int m,
                                 PartitionMode mode = PartitionMode::kBalanced,
                                 std::size_t qubit_cap = 0) {
    const auto iv = detail::chain_intervals(g.n(), m, mode);
    const std::size_t M = iv.size();

    if (qubit_cap > 0) {
        std::size_t largest = 0;
        for (const auto& [a, b] : iv) largest = std::max<std::size_t>(largest, b - a + 1);
        if (largest > qubit_cap) {
            const std::size_t need =
                (g.n() - 1 + qubit_cap - 2) / (qubit_cap - 1);  // ceil((n-1)/(cap-1))
            throw resource_error("largest subgraph has " + std::to_string(largest) +
                                 " vertices, over the " + std::to_string(qubit_cap) +
                                 "-qubit cap; use at least " + std::to_string(need) + " subgraphs");
        }
    }

    // last_piece[v]: highest interval index containing v; a seam vertex gets
    // the right-hand piece, so an edge is intra iff it fits that interval.
    std::vector<std::uint32_t> last_piece(g.n());
    for (std::size_t i = 0; i < M; ++i)
        for (Vertex v = iv[i].first; v <= iv[i].second; ++v) last_piece[v] = static_cast<std::uint32_t>(i);

    std::vector<Graph> locals;
    locals.reserve(M);
    for (const auto& [a, b] : iv) locals.emplace_back(b - a + 1);

    PartitionResult out;
    for (const Edge& e : g.edges()) {
        const std::uint32_t i = last_piece[e.u];  // e.u < e.v, so u's piece is the candidate
        if (e.v <= iv[i].second)
            locals[i].add_edge(e.u - iv[i].first, e.v - iv[i].first, e.w);
        else
            out.inter_edges.push_back(e);
    }

    out.subgraphs.reserve(M);
    for (std::size_t i = 0; i < M; ++i) {
        SubgraphSpec spec;
        spec.global_ids.resize(iv[i].second - iv[i].first + 1);
        for (std::size_t j = 0; j < spec.global_ids.size(); ++j)
            spec.global_ids[j] = iv[i].first + static_cast<Vertex>(j);
        spec.local_graph = std::move(locals[i]);
        if (i > 0) spec.shared_prev = 0;
        if (i + 1 < M) spec.shared_next = static_cast<Vertex>(spec.global_ids.size() - 1);
        out.subgraphs.push_back(std::move(spec));
    }
    return out;
}

/// Smallest chain length whose pieces all fit in qubit_cap qubits.
inline int derive_subgraph_count(std::size_t n, std::size_t qubit_cap) {
    if (qubit_cap < 2) throw config_error("qubit cap must be at least 2");
    if (n <= qubit_cap) return 1;
    return static_cast<int>((n - 1 + qubit_cap - 2) / (qubit_cap - 1));
}

} // namespace qcut
