#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "qcut/errors.hpp"
#include "qcut/graph.hpp"
#include "qcut/partition.hpp"
#include "qcut/qaoa.hpp"

namespace qcut {

/// Per-subgraph candidate lists ready for chain merging, one level per piece.
struct CandidatePool {
    struct Level {
        int width = 0;
        std::vector<std::uint32_t> bits;
    };
    std::vector<Level> levels;
};

/// Expand candidate sets into merge pools: each retained entry contributes
/// both orientations {b, ~b}, kept in entry order with b before ~b. Unfolded
/// sets can list both orientations already; duplicates keep their first
/// occurrence, so every level stays closed under complement.
inline CandidatePool build_candidate_pools(const std::vector<CandidateSet>& sets) {
    if (sets.empty()) throw config_error("no candidate sets to merge");
    CandidatePool pool;
    pool.levels.reserve(sets.size());
    for (const CandidateSet& cs : sets) {
        if (cs.width < 1 || cs.width > 32) throw config_error("candidate width out of range");
        if (cs.entries.empty()) throw config_error("candidate set has no entries");
        const std::uint32_t full =
            cs.width == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << cs.width) - 1;
        CandidatePool::Level lv;
        lv.width = cs.width;
        std::unordered_set<std::uint32_t> seen;
        for (const Candidate& e : cs.entries) {
            if (e.bits > full) throw config_error("candidate bits exceed declared width");
            for (std::uint32_t b : {e.bits, e.bits ^ full})
                if (seen.insert(b).second) lv.bits.push_back(b);
        }
        pool.levels.push_back(std::move(lv));
    }
    return pool;
}

/// Chain compatibility: the previous piece's last bit and the next piece's
/// first bit are the same shared vertex, so they must agree.
inline bool compatible(std::uint32_t prev_bits, int prev_width, std::uint32_t next_bits) {
    if (prev_width < 1) throw config_error("candidate width out of range");
    return ((prev_bits >> (prev_width - 1)) & 1u) == (next_bits & 1u);
}

/// Write a local candidate into the global assignment. Pieces past the first
/// rewrite their shared vertex with the value compatibility already matched;
/// that is exactly concatenation with the overlapped bit dropped once.
inline void apply_candidate(Assignment& a, const SubgraphSpec& spec, std::uint32_t bits) {
    for (std::size_t j = 0; j < spec.global_ids.size(); ++j)
        a.bits[spec.global_ids[j]] = static_cast<std::uint8_t>((bits >> j) & 1u);
}

/// Complete chain combinations a merge enumerates, assuming complement-closed
/// pools: |B_1| * prod_{i>1} |B_i|/2, halved once more when the global-flip
/// symmetry is exploited.
inline double estimate_paths(const CandidatePool& pool, bool halve_symmetry = false) {
    if (pool.levels.empty()) throw config_error("empty candidate pool");
    double est = static_cast<double>(pool.levels[0].bits.size());
    if (halve_symmetry) est /= 2.0;
    for (std::size_t i = 1; i < pool.levels.size(); ++i)
        est *= static_cast<double>(pool.levels[i].bits.size()) / 2.0;
    return est;
}

enum class MergeEval {
    kFullGraph,    // score each complete assignment against the whole graph
    kIncremental,  // accumulate per-level edge buckets along the search path
};

struct MergeOptions {
    int start_level = 1;  // levels expanded eagerly into worker-sharded prefixes
    int workers = 1;
    MergeEval eval = MergeEval::kFullGraph;
    double path_budget = 1e9;     // refuse enumerations larger than this
    bool halve_symmetry = false;  // skip global complements (never changes the result)
};

struct MergeResult {
    double best_value = 0.0;
    Assignment best_assignment;
    std::uint64_t candidates_evaluated = 0;
};

namespace detail {

/// Edges grouped by the first level at which both endpoints are assigned.
/// Summing bucket gains level by level reproduces the full cut exactly.
inline std::vector<std::vector<Edge>> level_edge_buckets(const Graph& g,
                                                         const PartitionResult& part) {
    const std::size_t M = part.subgraphs.size();
    std::vector<std::uint32_t> first_level(g.n(), 0);
    for (std::size_t i = M; i-- > 0;)
        for (Vertex v : part.subgraphs[i].global_ids) first_level[v] = static_cast<std::uint32_t>(i);
    std::vector<std::vector<Edge>> buckets(M);
    for (const Edge& e : g.edges())
        buckets[std::max(first_level[e.u], first_level[e.v])].push_back(e);
    return buckets;
}

inline double bucket_gain(const std::vector<Edge>& edges, const Assignment& a) {
    double s = 0.0;
    for (const Edge& e : edges)
        if (a.bits[e.u] != a.bits[e.v]) s += e.w;
    return s;
}

inline void check_pool_matches(const CandidatePool& pool, const Graph& g,
                               const PartitionResult& part) {
    if (part.subgraphs.empty()) throw config_error("merge needs at least one subgraph");
    if (pool.levels.size() != part.subgraphs.size())
        throw config_error("pool has " + std::to_string(pool.levels.size()) + " levels for " +
                           std::to_string(part.subgraphs.size()) + " subgraphs");
    std::size_t covered = 0;
    for (std::size_t i = 0; i < pool.levels.size(); ++i) {
        const auto& lv = pool.levels[i];
        const std::size_t piece = part.subgraphs[i].size();
        if (lv.width < 1 || static_cast<std::size_t>(lv.width) != piece)
            throw config_error("pool level " + std::to_string(i) + " width " +
                               std::to_string(lv.width) + " does not match subgraph size " +
                               std::to_string(piece));
        if (lv.bits.empty()) throw config_error("pool level " + std::to_string(i) + " is empty");
        covered += piece;
    }
    if (covered != g.n() + part.subgraphs.size() - 1)
        throw config_error("subgraphs do not cover the graph as a chain");
}

struct SearchBest {
    double value = -std::numeric_limits<double>::infinity();
    Assignment assignment;
    std::uint64_t leaves = 0;
};

struct WalkCtx {
    const Graph* g = nullptr;
    const CandidatePool* pool = nullptr;
    const std::vector<SubgraphSpec>* specs = nullptr;
    const std::vector<std::vector<Edge>>* buckets = nullptr;  // null in full-graph mode
    std::size_t stop = 0;         // one past the last level to assign
    std::size_t compare_end = 0;  // global vertices assigned once stop is reached
};

/// Depth-first product of compatible candidates over levels [level, stop).
/// Mutates `a` in place; every candidate write fully covers its interval, so
/// no undo pass is needed.
inline void walk_levels(const WalkCtx& c, std::size_t level, double acc, Assignment& a,
                        SearchBest& out) {
    if (level == c.stop) {
        const double value = c.buckets ? acc : cut_value(*c.g, a);
        ++out.leaves;
        if (value > out.value ||
            (value == out.value &&
             std::lexicographical_compare(a.bits.begin(), a.bits.begin() + c.compare_end,
                                          out.assignment.bits.begin(),
                                          out.assignment.bits.begin() + c.compare_end))) {
            out.value = value;
            out.assignment = a;
        }
        return;
    }
    const auto& lv = (*c.pool).levels[level];
    const auto& spec = (*c.specs)[level];
    const std::uint8_t need = a.bits[spec.global_ids.front()];
    for (std::uint32_t b : lv.bits) {
        if ((b & 1u) != need) continue;
        apply_candidate(a, spec, b);
        const double next =
            c.buckets ? acc + bucket_gain((*c.buckets)[level], a) : 0.0;
        walk_levels(c, level + 1, next, a, out);
    }
}

/// Flattened choice tuples for levels [from, from+depth), compatibility
/// filtered. `need_first` pins the first level's leading bit (0/1), 2 leaves
/// it free, 3 keeps only candidates whose bit 0 is clear (complement halving;
/// only meaningful at the head of the chain).
inline void collect_prefixes(const CandidatePool& pool, std::size_t from, std::size_t depth,
                             int need_first, std::vector<std::uint32_t>& cur,
                             std::vector<std::uint32_t>& out) {
    if (cur.size() == depth) {
        out.insert(out.end(), cur.begin(), cur.end());
        return;
    }
    const std::size_t level = from + cur.size();
    const auto& lv = pool.levels[level];
    int need;
    if (cur.empty()) {
        need = need_first;
    } else {
        const auto& prev = pool.levels[level - 1];
        need = static_cast<int>((cur.back() >> (prev.width - 1)) & 1u);
    }
    for (std::uint32_t b : lv.bits) {
        const std::uint32_t lead = b & 1u;
        if (need <= 1 && static_cast<int>(lead) != need) continue;
        if (need == 3 && lead != 0) continue;
        cur.push_back(b);
        collect_prefixes(pool, from, depth, need_first, cur, out);
        cur.pop_back();
    }
}

/// Shards the prefix list round-robin over `workers` threads, runs the
/// depth-first walk below each prefix, and reduces the per-worker bests in
/// worker order. Bit-identical results for any worker count. depth >= 1 keeps
/// the chain head's choices in the prefixes, where they belong: the walk
/// itself always reads the seam bit its predecessor wrote.
inline SearchBest sharded_search(const WalkCtx& c, const std::vector<std::uint32_t>& prefixes,
                                 std::size_t depth, std::size_t from, const Assignment& base,
                                 double base_acc, int workers) {
    const std::size_t count = prefixes.size() / depth;
    const int spawn = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(count, 1)));

    auto run_shard = [&](int w, SearchBest& best) {
        Assignment a = base;
        for (std::size_t pi = static_cast<std::size_t>(w); pi < count;
             pi += static_cast<std::size_t>(spawn)) {
            double acc = base_acc;
            for (std::size_t d = 0; d < depth; ++d) {
                const std::size_t level = from + d;
                apply_candidate(a, (*c.specs)[level], prefixes[pi * depth + d]);
                if (c.buckets) acc += bucket_gain((*c.buckets)[level], a);
            }
            walk_levels(c, from + depth, acc, a, best);
        }
    };

    std::vector<SearchBest> bests(static_cast<std::size_t>(spawn));
    if (spawn == 1) {
        run_shard(0, bests[0]);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(spawn));
        for (int w = 0; w < spawn; ++w)
            threads.emplace_back([&, w] { run_shard(w, bests[static_cast<std::size_t>(w)]); });
        for (auto& t : threads) t.join();
    }

    SearchBest total;
    for (const SearchBest& b : bests) {
        total.leaves += b.leaves;
        if (b.leaves == 0) continue;
        if (b.value > total.value ||
            (b.value == total.value &&
             std::lexicographical_compare(b.assignment.bits.begin(),
                                          b.assignment.bits.begin() + c.compare_end,
                                          total.assignment.bits.begin(),
                                          total.assignment.bits.begin() + c.compare_end))) {
            total.value = b.value;
            total.assignment = b.assignment;
        }
    }
    return total;
}

} // namespace detail

/// Exhaustive compatible-chain search over the candidate pools. The first
/// start_level levels are expanded eagerly into prefixes and sharded across
/// workers; the rest is a depth-first walk. Refuses to start if the
/// enumeration would exceed path_budget complete chains. The returned value
/// is always cut_value(g, best_assignment) recomputed from scratch; ties
/// break to the lexicographically smallest assignment.
inline MergeResult level_aware_merge(const CandidatePool& pool, const Graph& g,
                                     const PartitionResult& part, const MergeOptions& opt = {}) {
    detail::check_pool_matches(pool, g, part);
    const std::size_t M = pool.levels.size();
    if (opt.start_level < 1 || static_cast<std::size_t>(opt.start_level) > M)
        throw config_error("start level must lie in [1, " + std::to_string(M) + "]");
    if (opt.workers < 1) throw config_error("worker count must be positive");
    if (!(opt.path_budget > 0)) throw config_error("path budget must be positive");

    const double est = estimate_paths(pool, opt.halve_symmetry);
    if (est > opt.path_budget)
        throw resource_error("merge would enumerate about " + std::to_string(est) +
                             " complete chains, over the " + std::to_string(opt.path_budget) +
                             " budget; lower the retained candidate count or the subgraph count, "
                             "or switch to the windowed merge");

    const std::size_t depth = static_cast<std::size_t>(opt.start_level);
    double prefix_est = static_cast<double>(pool.levels[0].bits.size());
    if (opt.halve_symmetry) prefix_est /= 2.0;
    for (std::size_t i = 1; i < depth; ++i)
        prefix_est *= static_cast<double>(pool.levels[i].bits.size()) / 2.0;
    if (prefix_est > static_cast<double>(std::size_t{1} << 22))
        throw resource_error("start level " + std::to_string(opt.start_level) +
                             " expands to about " + std::to_string(prefix_est) +
                             " prefixes; lower it");

    std::vector<std::vector<Edge>> buckets;
    detail::WalkCtx ctx;
    ctx.g = &g;
    ctx.pool = &pool;
    ctx.specs = &part.subgraphs;
    if (opt.eval == MergeEval::kIncremental) {
        buckets = detail::level_edge_buckets(g, part);
        ctx.buckets = &buckets;
    }
    ctx.stop = M;
    ctx.compare_end = g.n();

    std::vector<std::uint32_t> prefixes, scratch;
    detail::collect_prefixes(pool, 0, depth, opt.halve_symmetry ? 3 : 2, scratch, prefixes);

    Assignment base(g.n(), 0);
    detail::SearchBest best =
        detail::sharded_search(ctx, prefixes, depth, 0, base, 0.0, opt.workers);
    if (best.leaves == 0) throw config_error("no compatible candidate chain exists");

    MergeResult res;
    res.best_value = cut_value(g, best.assignment);
    res.best_assignment = std::move(best.assignment);
    res.candidates_evaluated = best.leaves;
    return res;
}

struct ChainedMergeOptions {
    std::size_t window = 0;               // levels optimized jointly; 0 sizes automatically
    std::size_t window_leaves = 1 << 16;  // auto sizing aims below this many combos per block
    int workers = 1;
    bool halve_symmetry = true;  // safe here: a global flip never changes the cut
};

/// Greedy windowed variant for chains too deep to enumerate: fixes the best
/// joint choice for a block of consecutive levels, then slides on. Exact
/// whenever one window covers every level; otherwise a deterministic
/// heuristic. Scoring is incremental, and the returned value is recomputed
/// from the final assignment.
inline MergeResult chained_merge(const CandidatePool& pool, const Graph& g,
                                 const PartitionResult& part,
                                 const ChainedMergeOptions& opt = {}) {
    detail::check_pool_matches(pool, g, part);
    const std::size_t M = pool.levels.size();
    if (opt.workers < 1) throw config_error("worker count must be positive");
    if (opt.window_leaves < 2) throw config_error("window leaf target must be at least 2");

    const auto buckets = detail::level_edge_buckets(g, part);
    detail::WalkCtx ctx;
    ctx.g = &g;
    ctx.pool = &pool;
    ctx.specs = &part.subgraphs;
    ctx.buckets = &buckets;

    Assignment asg(g.n(), 0);
    double acc = 0.0;
    std::uint64_t total_leaves = 0;

    std::size_t s = 0;
    while (s < M) {
        std::size_t e = s + 1;
        double leaves = static_cast<double>(pool.levels[s].bits.size());
        if (s == 0 && opt.halve_symmetry) leaves /= 2.0;
        if (s > 0) leaves /= 2.0;
        if (opt.window > 0) {
            const std::size_t cap = std::min(M, s + opt.window);
            for (; e < cap; ++e) leaves *= static_cast<double>(pool.levels[e].bits.size()) / 2.0;
        } else {
            while (e < M) {
                const double grown = leaves * static_cast<double>(pool.levels[e].bits.size()) / 2.0;
                if (grown > static_cast<double>(opt.window_leaves)) break;
                leaves = grown;
                ++e;
            }
        }
        if (leaves > 1e9)
            throw resource_error("merge window spans about " + std::to_string(leaves) +
                                 " combos; shrink the window");

        ctx.stop = e;
        ctx.compare_end = static_cast<std::size_t>(part.subgraphs[e - 1].global_ids.back()) + 1;

        int need_first;
        if (s == 0)
            need_first = opt.halve_symmetry ? 3 : 2;
        else
            need_first = asg.bits[part.subgraphs[s].global_ids.front()];

        // the block's first level becomes the prefix layer the threads shard
        std::vector<std::uint32_t> prefixes, scratch;
        detail::collect_prefixes(pool, s, 1, need_first, scratch, prefixes);
        detail::SearchBest best =
            detail::sharded_search(ctx, prefixes, 1, s, asg, acc, opt.workers);
        if (best.leaves == 0) throw config_error("no compatible candidate chain exists");

        asg = std::move(best.assignment);
        acc = best.value;
        total_leaves += best.leaves;
        s = e;
    }

    MergeResult res;
    res.best_value = cut_value(g, asg);
    res.best_assignment = std::move(asg);
    res.candidates_evaluated = total_leaves;
    return res;
}

} // namespace qcut
