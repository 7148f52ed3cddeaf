#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "qcut/errors.hpp"

namespace qcut {

using Vertex = std::uint32_t;

/// Undirected weighted edge, stored with u < v.
struct Edge {
    Vertex u;
    Vertex v;
    double w;
};

/// Simple undirected graph: a vertex count and an edge list.
/// No self-loops, no duplicate edges, no negative weights.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n) : n_(n) {}

    void add_edge(Vertex u, Vertex v, double w = 1.0) {
        if (u >= n_ || v >= n_)
            throw config_error("edge endpoint out of range: (" + std::to_string(u) + "," +
                               std::to_string(v) + ") with n=" + std::to_string(n_));
        if (u == v)
            throw config_error("self-loop rejected at vertex " + std::to_string(u));
        if (w < 0.0 || std::isnan(w))
            throw config_error("negative or NaN edge weight rejected");
        if (u > v) std::swap(u, v);
        const std::uint64_t key = static_cast<std::uint64_t>(u) * n_ + v;
        if (!keys_.insert(key).second)
            throw config_error("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        edges_.push_back({u, v, w});
    }

    std::size_t n() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(Vertex u, Vertex v) const {
        if (u > v) std::swap(u, v);
        return keys_.count(static_cast<std::uint64_t>(u) * n_ + v) != 0;
    }

    double total_weight() const {
        double s = 0.0;
        for (const Edge& e : edges_) s += e.w;
        return s;
    }

    /// Adjacency lists as (neighbor, weight) pairs.
    std::vector<std::vector<std::pair<Vertex, double>>> adjacency() const {
        std::vector<std::vector<std::pair<Vertex, double>>> adj(n_);
        for (const Edge& e : edges_) {
            adj[e.u].emplace_back(e.v, e.w);
            adj[e.v].emplace_back(e.u, e.w);
        }
        return adj;
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::unordered_set<std::uint64_t> keys_;
};

/// Bipartition of a graph's vertices: bits[v] = 1 puts v in S, 0 in the complement.
/// Ordering (for all tie-breaking) is lexicographic over bits[0], bits[1], ...,
/// i.e. numeric order reading the bitstring with vertex 0 as the most
/// significant digit.
struct Assignment {
    std::vector<std::uint8_t> bits;

    Assignment() = default;
    explicit Assignment(std::size_t n, std::uint8_t fill = 0) : bits(n, fill) {}

    std::size_t size() const { return bits.size(); }
    std::uint8_t operator[](std::size_t v) const { return bits[v]; }
    std::uint8_t& operator[](std::size_t v) { return bits[v]; }

    bool operator==(const Assignment& o) const { return bits == o.bits; }
    bool operator<(const Assignment& o) const { return bits < o.bits; }

    std::string to_string() const {
        std::string s(bits.size(), '0');
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) s[i] = '1';
        return s;
    }

    static Assignment from_string(const std::string& s) {
        Assignment a(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                a.bits[i] = 1;
            else if (s[i] != '0')
                throw config_error("assignment string must be over {0,1}");
        }
        return a;
    }
};

inline Assignment complement(const Assignment& a) {
    Assignment c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c.bits[i] = a.bits[i] ? 0 : 1;
    return c;
}

/// Total weight of edges crossing the bipartition.
inline double cut_value(const Graph& g, const Assignment& a) {
    if (a.size() != g.n())
        throw config_error("assignment length " + std::to_string(a.size()) +
                           " does not match vertex count " + std::to_string(g.n()));
    double v = 0.0;
    for (const Edge& e : g.edges())
        if (a.bits[e.u] != a.bits[e.v]) v += e.w;
    return v;
}

/// A cut value together with one assignment achieving it.
struct CutResult {
    double value = 0.0;
    Assignment assignment;
};

/// Erdős–Rényi G(n, p) with unit weights. Pairs (u, v), u < v, are visited in
/// lexicographic order and one uniform variate is drawn per pair from a
/// mersenne-twister (mt19937_64) stream seeded with `seed`, so the edge set is
/// a pure function of (n, p, seed) on any platform.
inline Graph generate_er_graph(std::size_t n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0 || std::isnan(p))
        throw config_error("edge probability must lie in [0,1]");
    Graph g(n);
    std::mt19937_64 rng(seed);
    for (Vertex u = 0; u + 1 < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            // 53-bit mantissa draw in [0,1); avoids distribution objects whose
            // output is not pinned by the standard.
            const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (x < p) g.add_edge(u, v, 1.0);
        }
    }
    return g;
}

namespace detail {

/// Lexicographic order over bit masks where bit position 0 is the first
/// (most significant) digit of the written bitstring. Matches Assignment's
/// operator< with bits[v] stored in mask bit v.
inline bool lex_less_mask(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t d = a ^ b;
    if (d == 0) return false;
    return (a & (d & ~(d - 1))) == 0;
}

/// Shortest round-trip decimal form; integral weights print without a point.
inline std::string format_weight(double w) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
    (void)ec;
    return std::string(buf, ptr);
}

inline bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace detail

/// Reads the edge-list format:
///   line 1: "n m"
///   then m lines "u v w" (or "u v", meaning w = 1.0), 0-indexed ids.
/// '#'-prefixed comment lines and blank lines are ignored.
inline Graph load_graph(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto next_payload_line = [&](std::string& out) -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!detail::is_comment_or_blank(line)) {
                out = line;
                return true;
            }
        }
        return false;
    };

    std::string header;
    if (!next_payload_line(header)) throw io_error("missing 'n m' header line");
    std::istringstream hs(header);
    long long n = -1, m = -1;
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra) || n < 0 || m < 0)
        throw io_error("malformed header at line " + std::to_string(lineno) +
                       ": expected 'n m'");

    Graph g(static_cast<std::size_t>(n));
    for (long long i = 0; i < m; ++i) {
        std::string el;
        if (!next_payload_line(el))
            throw io_error("expected " + std::to_string(m) + " edges, got " + std::to_string(i));
        std::istringstream es(el);
        long long u = -1, v = -1;
        double w = 1.0;
        if (!(es >> u >> v))
            throw io_error("malformed edge at line " + std::to_string(lineno));
        if (!(es >> w)) w = 1.0;  // weight omitted
        if (es >> extra) throw io_error("trailing tokens at line " + std::to_string(lineno));
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw io_error("vertex id out of range at line " + std::to_string(lineno));
        try {
            g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v), w);
        } catch (const config_error& e) {
            throw io_error(std::string(e.what()) + " at line " + std::to_string(lineno));
        }
    }
    std::string tail;
    if (next_payload_line(tail)) throw io_error("unexpected data after edge list");
    return g;
}

/// Canonical serialization: header, then edges sorted by (u, v).
/// save(load(f)) is byte-identical to the canonical form of f.
inline void save_graph(const Graph& g, std::ostream& out) {
    std::vector<Edge> es = g.edges();
    std::sort(es.begin(), es.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    out << g.n() << ' ' << es.size() << '\n';
    for (const Edge& e : es)
        out << e.u << ' ' << e.v << ' ' << detail::format_weight(e.w) << '\n';
    if (!out) throw io_error("write failure while saving graph");
}

inline Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open graph file: " + path);
    try {
        return load_graph(in);
    } catch (const io_error& e) {
        throw io_error(path + ": " + e.what());
    }
}

inline void save_graph_file(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    save_graph(g, out);
    out.flush();
    if (!out) throw io_error("write failure while saving graph to " + path);
}

} // namespace qcut
