#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "qcut/errors.hpp"
#include "qcut/graph.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcut {

/// Hard ceiling on simulated qubits (amplitude array is 16 bytes * 2^q).
inline constexpr std::size_t kQubitCap = 24;

/// Dense 2^q complex amplitude vector. Basis index z assigns vertex v the
/// value (z >> v) & 1, so bit 0 is vertex 0.
struct StateVector {
    std::vector<std::complex<double>> amps;

    std::size_t qubits() const { return amps.empty() ? 0 : std::countr_zero(amps.size()); }
    std::size_t size() const { return amps.size(); }
};

namespace detail {

// Loop bodies below use int64 indices: OpenMP wants signed loop variables.

template <typename Fn>
inline void parallel_index_loop(std::int64_t count, int threads, Fn&& body) {
#ifdef _OPENMP
    if (threads > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
#endif
    (void)threads;
    for (std::int64_t i = 0; i < count; ++i) body(i);
}

/// Sums f(z) over blocks of 4096 indices, then combines the per-block partial
/// sums in block order. The grouping is fixed, so the result is bit-identical
/// for any thread count.
template <typename Fn>
inline double blocked_sum(std::int64_t count, int threads, Fn&& f) {
    constexpr std::int64_t kBlock = 4096;
    const std::int64_t blocks = (count + kBlock - 1) / kBlock;
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
    parallel_index_loop(blocks, threads, [&](std::int64_t b) {
        const std::int64_t lo = b * kBlock, hi = std::min(count, lo + kBlock);
        double acc = 0.0;
        for (std::int64_t z = lo; z < hi; ++z) acc += f(z);
        partial[static_cast<std::size_t>(b)] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace detail

/// Cut value of every basis state, precomputed once per graph. When all edge
/// weights are nonnegative integers (and the total fits 16 bits) values are
/// kept as uint16 levels, which lets the cost layer phase through a small
/// lookup table instead of one sincos per amplitude.
class CostTable {
public:
    explicit CostTable(const Graph& g, std::size_t cap = kQubitCap) : qubits_(g.n()) {
        if (qubits_ < 1)
            throw config_error("cost table needs at least one vertex");
        if (qubits_ > cap)
            throw resource_error("cost table rejected: " + std::to_string(qubits_) +
                                 " qubits exceeds cap " + std::to_string(cap));
        const std::size_t size = std::size_t{1} << qubits_;

        double total = 0.0;
        integral_ = true;
        for (const Edge& e : g.edges()) {
            total += e.w;
            if (e.w != std::floor(e.w) || e.w < 0.0) integral_ = false;
        }
        if (total > 65535.0) integral_ = false;

        if (integral_) {
            levels_.assign(size, 0);
            for (const Edge& e : g.edges()) {
                const std::size_t bu = std::size_t{1} << e.u, bv = std::size_t{1} << e.v;
                const std::uint16_t w = static_cast<std::uint16_t>(e.w);
                for (std::size_t z = 0; z < size; ++z)
                    if (((z & bu) != 0) != ((z & bv) != 0)) levels_[z] += w;
            }
            max_value_ = 0.0;
            for (std::uint16_t l : levels_) max_value_ = std::max(max_value_, static_cast<double>(l));
        } else {
            values_.assign(size, 0.0);
            for (const Edge& e : g.edges()) {
                const std::size_t bu = std::size_t{1} << e.u, bv = std::size_t{1} << e.v;
                for (std::size_t z = 0; z < size; ++z)
                    if (((z & bu) != 0) != ((z & bv) != 0)) values_[z] += e.w;
            }
            max_value_ = 0.0;
            for (double v : values_) max_value_ = std::max(max_value_, v);
        }
    }

    std::size_t qubits() const { return qubits_; }
    std::size_t size() const { return std::size_t{1} << qubits_; }
    bool integral() const { return integral_; }
    double max_value() const { return max_value_; }

    double value(std::size_t z) const {
        return integral_ ? static_cast<double>(levels_[z]) : values_[z];
    }

    const std::vector<std::uint16_t>& levels() const { return levels_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::size_t qubits_;
    bool integral_;
    double max_value_;
    std::vector<std::uint16_t> levels_;
    std::vector<double> values_;
};

/// Uniform superposition |+>^q, the standard starting state.
inline StateVector plus_state(std::size_t q, std::size_t cap = kQubitCap) {
    if (q < 1) throw config_error("state needs at least one qubit");
    if (q > cap)
        throw resource_error("state rejected: " + std::to_string(q) + " qubits exceeds cap " +
                             std::to_string(cap));
    StateVector s;
    const std::size_t size = std::size_t{1} << q;
    s.amps.assign(size, std::complex<double>(1.0 / std::sqrt(static_cast<double>(size)), 0.0));
    return s;
}

/// Diagonal phase e^{-i*gamma*C(z)} per amplitude.
inline void apply_cost_layer(StateVector& s, const CostTable& table, double gamma,
                             int threads = 1) {
    if (s.size() != table.size()) throw config_error("state and cost table disagree on qubit count");
    if (gamma == 0.0) return;  // exact identity
    const std::int64_t n = static_cast<std::int64_t>(s.size());
    auto* amps = s.amps.data();
    if (table.integral()) {
        // distinct phases = distinct integer cut levels, tiny compared to 2^q
        const std::size_t nlut = static_cast<std::size_t>(table.max_value()) + 1;
        std::vector<std::complex<double>> lut(nlut);
        for (std::size_t c = 0; c < nlut; ++c)
            lut[c] = std::polar(1.0, -gamma * static_cast<double>(c));
        const auto* lev = table.levels().data();
        detail::parallel_index_loop(n, threads,
                                    [&](std::int64_t z) { amps[z] *= lut[lev[z]]; });
    } else {
        const auto* val = table.values().data();
        detail::parallel_index_loop(
            n, threads, [&](std::int64_t z) { amps[z] *= std::polar(1.0, -gamma * val[z]); });
    }
}

inline void apply_cost_layer(StateVector& s, const Graph& g, double gamma, int threads = 1) {
    CostTable table(g);
    apply_cost_layer(s, table, gamma, threads);
}

namespace detail {

/// One in-place e^{-i*beta*X} butterfly: a0' = c a0 - i s a1, a1' = -i s a0 + c a1.
inline void mixer_pair(std::complex<double>& a0, std::complex<double>& a1, double c, double sn) {
    const std::complex<double> t0 = a0, t1 = a1;
    a0 = {c * t0.real() + sn * t1.imag(), c * t0.imag() - sn * t1.real()};
    a1 = {sn * t0.imag() + c * t1.real(), c * t1.imag() - sn * t0.real()};
}

} // namespace detail

/// e^{-i*beta*X} on every qubit. Targets below kMixerBlockBits are applied
/// chunk by chunk while the chunk is cache resident (one memory traversal for
/// all of them); the remaining high targets each take one streaming pass.
inline constexpr std::size_t kMixerBlockBits = 11;

inline void apply_mixer_layer(StateVector& s, double beta, int threads = 1) {
    const std::size_t q = s.qubits();
    if (q == 0) throw config_error("mixer on empty state");
    const double c = std::cos(beta), sn = std::sin(beta);
    if (sn == 0.0 && c == 1.0) return;  // exact identity, common at ramp endpoints
    auto* amps = s.amps.data();

    const std::size_t low = std::min(q, kMixerBlockBits);
    const std::size_t chunk = std::size_t{1} << low;
    const std::int64_t chunks = static_cast<std::int64_t>(s.size() >> low);
    detail::parallel_index_loop(chunks, threads, [&](std::int64_t ci) {
        auto* base = amps + static_cast<std::size_t>(ci) * chunk;
        for (std::size_t t = 0; t < low; ++t) {
            const std::size_t half = std::size_t{1} << t;
            const std::size_t low_mask = half - 1;
            for (std::size_t k = 0; k < chunk / 2; ++k) {
                const std::size_t i = ((k & ~low_mask) << 1) | (k & low_mask);
                detail::mixer_pair(base[i], base[i + half], c, sn);
            }
        }
    });

    const std::int64_t pairs = static_cast<std::int64_t>(s.size() >> 1);
    for (std::size_t t = low; t < q; ++t) {
        const std::size_t half = std::size_t{1} << t;
        const std::size_t low_mask = half - 1;
        detail::parallel_index_loop(pairs, threads, [&](std::int64_t k) {
            const std::size_t uk = static_cast<std::size_t>(k);
            const std::size_t i = ((uk & ~low_mask) << 1) | (uk & low_mask);
            detail::mixer_pair(amps[i], amps[i + half], c, sn);
        });
    }
}

/// <psi| C |psi> = sum_z |amp_z|^2 C(z), deterministically blocked.
inline double expectation(const StateVector& s, const CostTable& table, int threads = 1) {
    if (s.size() != table.size()) throw config_error("state and cost table disagree on qubit count");
    const auto* amps = s.amps.data();
    if (table.integral()) {
        const auto* lev = table.levels().data();
        return detail::blocked_sum(static_cast<std::int64_t>(s.size()), threads,
                                   [&](std::int64_t z) { return std::norm(amps[z]) * lev[z]; });
    }
    const auto* val = table.values().data();
    return detail::blocked_sum(static_cast<std::int64_t>(s.size()), threads,
                               [&](std::int64_t z) { return std::norm(amps[z]) * val[z]; });
}

inline double norm_sq(const StateVector& s, int threads = 1) {
    const auto* amps = s.amps.data();
    return detail::blocked_sum(static_cast<std::int64_t>(s.size()), threads,
                               [&](std::int64_t z) { return std::norm(amps[z]); });
}

} // namespace qcut
