#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "qcut/errors.hpp"
#include "qcut/graph.hpp"

namespace qcut {

/// Exact maximum cut by enumeration over 2^(n-1) assignments (vertex 0 is
/// pinned to side 0; a global flip never changes the cut). Enumerates in Gray
/// code order so each step costs one vertex-degree update. Ties go to the
/// lexicographically smallest assignment.
inline CutResult brute_force_max_cut(const Graph& g, std::size_t cap = 24) {
    const std::size_t n = g.n();
    if (n > cap)
        throw resource_error("brute force rejected: n=" + std::to_string(n) + " exceeds cap " +
                             std::to_string(cap) + " (cost 2^n); raise the cap explicitly if intended");
    if (n == 0) return {0.0, Assignment{}};

    const auto adj = g.adjacency();
    Assignment cur(n, 0);
    double val = 0.0;
    double best_val = 0.0;
    std::uint64_t cur_mask = 0, best_mask = 0;  // bit (v-1) holds vertex v

    const std::uint64_t steps = std::uint64_t{1} << (n - 1);
    for (std::uint64_t t = 1; t < steps; ++t) {
        const int flip = std::countr_zero(t);
        const Vertex v = static_cast<Vertex>(flip + 1);
        double delta = 0.0;
        const std::uint8_t side = cur.bits[v];
        for (const auto& [u, w] : adj[v]) delta += (cur.bits[u] == side) ? w : -w;
        cur.bits[v] ^= 1;
        cur_mask ^= std::uint64_t{1} << flip;
        val += delta;
        if (val > best_val ||
            (val == best_val && detail::lex_less_mask(cur_mask, best_mask))) {
            best_val = val;
            best_mask = cur_mask;
        }
    }

    Assignment best(n, 0);
    for (std::size_t v = 1; v < n; ++v) best.bits[v] = (best_mask >> (v - 1)) & 1;
    return {cut_value(g, best), best};  // recomputed, not the running sum
}

/// Steepest-ascent hill climb: repeatedly flip the single vertex with the
/// largest strictly positive cut gain (ties to the lowest vertex id).
inline CutResult hill_climb(const Graph& g, Assignment a) {
    const std::size_t n = g.n();
    if (a.size() != n) throw config_error("hill climb start has wrong length");
    const auto adj = g.adjacency();

    // gain[v] = cut change if v flips
    std::vector<double> gain(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
        for (const auto& [u, w] : adj[v]) gain[v] += (a.bits[u] == a.bits[v]) ? w : -w;

    for (;;) {
        std::size_t pick = n;
        double best_gain = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            if (gain[v] > best_gain) { best_gain = gain[v]; pick = v; }
        if (pick == n) break;
        for (const auto& [u, w] : adj[pick])
            gain[u] += (a.bits[u] == a.bits[pick]) ? -2.0 * w : 2.0 * w;
        a.bits[pick] ^= 1;
        gain[pick] = -gain[pick];
    }
    return {cut_value(g, a), a};
}

/// Best-of-restarts local search from seeded random starts. Deterministic for
/// fixed (graph, restarts, seed); ties across restarts go to the
/// lexicographically smallest assignment.
inline CutResult local_search_max_cut(const Graph& g, int restarts, std::uint64_t seed) {
    if (restarts < 1) throw config_error("local search needs at least one restart");
    const std::size_t n = g.n();
    std::mt19937_64 rng(seed);
    CutResult best{-1.0, Assignment(n, 0)};
    for (int r = 0; r < restarts; ++r) {
        Assignment start(n);
        for (std::size_t v = 0; v < n; ++v) start.bits[v] = static_cast<std::uint8_t>(rng() & 1);
        CutResult res = hill_climb(g, std::move(start));
        if (res.value > best.value ||
            (res.value == best.value && res.assignment < best.assignment))
            best = std::move(res);
    }
    return best;
}

} // namespace qcut
