// Independent reference implementations the tests check the library against.
// Everything here is deliberately written the slow, obvious way and shares no
// code with the library internals.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qcut/graph.hpp"

namespace ref {

// Cut value via a dense weight matrix and a pair scan; no shared code with
// qcut::cut_value (which walks the edge list directly).
inline double cut_value(const qcut::Graph& g, const qcut::Assignment& a) {
    const std::size_t n = g.n();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (const auto& e : g.edges()) {
        w[e.u][e.v] += e.w;
        w[e.v][e.u] += e.w;
    }
    double total = 0.0;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (a.bits[u] != a.bits[v]) total += w[u][v];
    return total;
}

// Exhaustive max cut over all 2^n assignments, no symmetry shortcut, ties to
// the lexicographically smallest bitstring (vertex 0 is the first character).
inline qcut::CutResult enumerate_max_cut(const qcut::Graph& g) {
    const std::size_t n = g.n();
    qcut::CutResult best{-1.0, qcut::Assignment(n, 0)};
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        qcut::Assignment a(n);
        for (std::size_t v = 0; v < n; ++v) a.bits[v] = (mask >> v) & 1;
        const double val = ref::cut_value(g, a);
        if (val > best.value || (val == best.value && a < best.assignment)) {
            best.value = val;
            best.assignment = a;
        }
    }
    return best;
}

using CVec = std::vector<std::complex<double>>;
using CMat = std::vector<CVec>;  // row-major dense matrix

inline CVec mat_vec(const CMat& m, const CVec& v) {
    CVec out(m.size(), {0.0, 0.0});
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
    return out;
}

// Diagonal phase matrix e^{-i gamma C(z)} with C recomputed independently.
inline CMat dense_cost_matrix(const qcut::Graph& g, double gamma) {
    const std::size_t dim = std::size_t{1} << g.n();
    CMat m(dim, CVec(dim, {0.0, 0.0}));
    for (std::size_t z = 0; z < dim; ++z) {
        qcut::Assignment a(g.n());
        for (std::size_t v = 0; v < g.n(); ++v) a.bits[v] = (z >> v) & 1;
        const double c = ref::cut_value(g, a);
        m[z][z] = std::exp(std::complex<double>(0.0, -gamma * c));
    }
    return m;
}

// Full Kronecker product of one e^{-i beta X} per qubit. Matrix element
// (z', z) is the product over qubits of the 2x2 entries picked by the
// corresponding bits (qubit t = bit t of the index).
inline CMat dense_mixer_matrix(std::size_t qubits, double beta) {
    const std::complex<double> diag(std::cos(beta), 0.0);
    const std::complex<double> off(0.0, -std::sin(beta));
    const std::complex<double> u[2][2] = {{diag, off}, {off, diag}};
    const std::size_t dim = std::size_t{1} << qubits;
    CMat m(dim, CVec(dim, {1.0, 0.0}));
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            for (std::size_t t = 0; t < qubits; ++t)
                m[r][c] *= u[(r >> t) & 1][(c >> t) & 1];
    return m;
}

inline CVec plus_vector(std::size_t qubits) {
    const std::size_t dim = std::size_t{1} << qubits;
    return CVec(dim, {1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
}

inline CVec random_state(std::size_t qubits, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVec v(std::size_t{1} << qubits);
    double norm = 0.0;
    for (auto& a : v) {
        a = {gauss(rng), gauss(rng)};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : v) a /= norm;
    return v;
}

// Exact hand-rolled 2-qubit QAOA for a single unit edge: returns the cost
// expectation at (gamma, beta). Basis order 00, 01, 10, 11; C = (0,1,1,0).
inline double single_edge_expectation(double gamma, double beta) {
    std::complex<double> amp[4] = {{0.5, 0.0}, {0.5, 0.0}, {0.5, 0.0}, {0.5, 0.0}};
    const double cost[4] = {0.0, 1.0, 1.0, 0.0};
    for (int z = 0; z < 4; ++z) amp[z] *= std::exp(std::complex<double>(0.0, -gamma * cost[z]));
    const std::complex<double> c(std::cos(beta), 0.0), s(0.0, -std::sin(beta));
    // qubit 0 pairs (00,01) and (10,11); qubit 1 pairs (00,10) and (01,11)
    auto rotate = [&](int i, int j) {
        const std::complex<double> a0 = amp[i], a1 = amp[j];
        amp[i] = c * a0 + s * a1;
        amp[j] = s * a0 + c * a1;
    };
    rotate(0, 1);
    rotate(2, 3);
    rotate(0, 2);
    rotate(1, 3);
    double e = 0.0;
    for (int z = 0; z < 4; ++z) e += std::norm(amp[z]) * cost[z];
    return e;
}

// Best single-edge expectation over the [0, pi]^2 grid with the given step.
inline double single_edge_grid_max(double step = 0.01) {
    double best = 0.0;
    for (double gamma = 0.0; gamma <= 3.1415926535897932 + 1e-12; gamma += step)
        for (double beta = 0.0; beta <= 3.1415926535897932 + 1e-12; beta += step)
            best = std::max(best, single_edge_expectation(gamma, beta));
    return best;
}

} // namespace ref
