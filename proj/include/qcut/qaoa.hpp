#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qcut/errors.hpp"
#include "qcut/graph.hpp"
#include "qcut/nelder_mead.hpp"
#include "qcut/statevector.hpp"

namespace qcut {

struct QaoaParams {
    std::vector<double> gammas;
    std::vector<double> betas;

    int layers() const { return static_cast<int>(gammas.size()); }
    bool operator==(const QaoaParams& o) const = default;
};

/// Standard warm-start ramp: layer l of p gets gamma = (l/p)(pi/2) rising and
/// beta = (1 - l/p)(pi/2) falling, l = 1..p.
inline QaoaParams linear_ramp(int p) {
    if (p < 1) throw config_error("layer count must be positive");
    QaoaParams q;
    q.gammas.resize(p);
    q.betas.resize(p);
    for (int l = 1; l <= p; ++l) {
        const double frac = static_cast<double>(l) / static_cast<double>(p);
        q.gammas[l - 1] = frac * std::numbers::pi / 2.0;
        q.betas[l - 1] = (1.0 - frac) * std::numbers::pi / 2.0;
    }
    return q;
}

namespace detail {

inline std::vector<double> pack_params(const QaoaParams& p) {
    std::vector<double> x(p.gammas);
    x.insert(x.end(), p.betas.begin(), p.betas.end());
    return x;
}

inline QaoaParams unpack_params(const std::vector<double>& x) {
    QaoaParams p;
    const std::size_t half = x.size() / 2;
    p.gammas.assign(x.begin(), x.begin() + half);
    p.betas.assign(x.begin() + half, x.end());
    return p;
}

} // namespace detail

/// Alternating cost/mixer circuit applied to |+>^q.
inline StateVector run_ansatz(const CostTable& table, const QaoaParams& params, int threads = 1) {
    if (params.gammas.size() != params.betas.size())
        throw config_error("gamma and beta schedules must have equal length");
    StateVector s = plus_state(table.qubits());
    for (std::size_t l = 0; l < params.gammas.size(); ++l) {
        apply_cost_layer(s, table, params.gammas[l], threads);
        apply_mixer_layer(s, params.betas[l], threads);
    }
    return s;
}

inline StateVector run_ansatz(const Graph& g, const QaoaParams& params, int threads = 1) {
    CostTable table(g);
    return run_ansatz(table, params, threads);
}

struct OptimizeResult {
    QaoaParams params;
    double expectation = 0.0;  // of the returned parameters
    int evals = 0;
};

/// Maximizes <C> over the 2p angles by Nelder-Mead descent on the negated
/// objective, starting from the linear ramp. Leftover budget after an early
/// convergence funds restarts from seeded uniform draws in [0, pi]^2p; the
/// best point across all starts wins.
inline OptimizeResult optimize_parameters(const CostTable& table, int p, int budget,
                                          std::uint64_t seed = 0, int threads = 1,
                                          double tolerance = 1e-5) {
    if (budget < 1) throw config_error("optimizer budget must be positive");
    auto objective = [&](const std::vector<double>& x) {
        return -expectation(run_ansatz(table, detail::unpack_params(x), threads), table, threads);
    };

    OptimizeResult out;
    out.params = linear_ramp(p);
    double best_neg = objective(detail::pack_params(out.params));
    out.evals = 1;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    std::vector<double> start = detail::pack_params(out.params);
    while (out.evals < budget) {
        NelderMeadOptions opt;
        opt.max_evals = budget - out.evals;
        opt.tolerance = tolerance;
        NelderMeadResult r = nelder_mead_minimize(objective, start, opt);
        out.evals += r.evals;
        if (r.value < best_neg) {
            best_neg = r.value;
            out.params = detail::unpack_params(r.x);
        }
        if (!r.converged) break;  // budget exhausted mid-run
        start.assign(2 * static_cast<std::size_t>(p), 0.0);
        for (double& v : start) v = angle(rng);
    }
    out.expectation = -best_neg;
    return out;
}

/// One retained basis state: the low `width` bits of `bits` hold the local
/// assignment (bit j = local vertex j).
struct Candidate {
    std::uint32_t bits = 0;
    double probability = 0.0;
};

/// Top measurement outcomes of one subgraph solve, highest probability first.
/// When folded, complementary pairs {z, ~z} are merged and each entry is the
/// even representative (local vertex 0 on side 0); probability is the pair's
/// combined mass.
struct CandidateSet {
    int width = 0;     // local qubit count
    bool folded = true;
    std::vector<Candidate> entries;
};

struct SolveOptions {
    int top_k = 2;
    int layers = 3;
    int budget = 200;
    std::uint64_t seed = 0;
    bool fold = true;
    int threads = 1;
    std::size_t qubit_cap = 20;  // solver-facing cap; the 24-qubit array cap still binds
    double tolerance = 1e-5;
};

struct SolveResult {
    CandidateSet candidates;
    QaoaParams params;
    double expectation = 0.0;
    int evals = 0;
};

/// Top-k measurement outcomes of a state. Folding sums each complement pair
/// {z, ~z} into its even representative (vertex 0 on side 0). Ties in
/// probability go to the lexicographically smallest bitstring, vertex 0
/// first.
inline CandidateSet top_candidates(const StateVector& s, int top_k, bool fold) {
    const std::size_t n = s.qubits();
    if (n < 1) throw config_error("cannot rank candidates of an empty state");
    if (n > 32) throw resource_error("candidate bits limited to 32 qubits");
    const std::size_t classes = fold ? (std::size_t{1} << (n - 1)) : (std::size_t{1} << n);
    if (top_k < 1 || static_cast<std::size_t>(top_k) > classes)
        throw config_error("top_k must lie in [1, " + std::to_string(classes) + "] for " +
                           std::to_string(n) + " qubits" + (fold ? " (folded)" : ""));

    std::vector<Candidate> all;
    const std::size_t size = s.size();
    if (fold) {
        all.reserve(size / 2);
        const std::uint32_t full = static_cast<std::uint32_t>(size - 1);
        for (std::uint32_t z = 0; z < size; z += 2)  // even z = classes with vertex 0 on side 0
            all.push_back({z, std::norm(s.amps[z]) + std::norm(s.amps[z ^ full])});
    } else {
        all.reserve(size);
        for (std::uint32_t z = 0; z < size; ++z) all.push_back({z, std::norm(s.amps[z])});
    }

    auto better = [](const Candidate& a, const Candidate& b) {
        if (a.probability != b.probability) return a.probability > b.probability;
        return detail::lex_less_mask(a.bits, b.bits);
    };
    const std::size_t k = static_cast<std::size_t>(top_k);
    std::nth_element(all.begin(), all.begin() + (k - 1), all.end(), better);
    all.resize(k);
    std::sort(all.begin(), all.end(), better);

    CandidateSet set;
    set.width = static_cast<int>(n);
    set.folded = fold;
    set.entries = std::move(all);
    return set;
}

/// Full QAOA treatment of one subgraph: optimize angles, run the final
/// circuit, and keep the top_k most probable outcomes (complement classes
/// when folding).
inline SolveResult solve_subgraph(const Graph& sub, const SolveOptions& opt = {}) {
    const std::size_t n = sub.n();
    if (n < 1) throw config_error("cannot solve an empty subgraph");
    if (n > opt.qubit_cap || n > kQubitCap)
        throw resource_error("subgraph has " + std::to_string(n) + " vertices, over the " +
                             std::to_string(std::min(opt.qubit_cap, kQubitCap)) + "-qubit cap");

    CostTable table(sub, kQubitCap);
    OptimizeResult best =
        optimize_parameters(table, opt.layers, opt.budget, opt.seed, opt.threads, opt.tolerance);
    const StateVector s = run_ansatz(table, best.params, opt.threads);

    SolveResult res;
    res.candidates = top_candidates(s, opt.top_k, opt.fold);
    res.params = std::move(best.params);
    res.expectation = best.expectation;
    res.evals = best.evals;
    return res;
}

} // namespace qcut
