// Statevector engine: cost table, phase layer, mixer layer, expectation.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "qcut/statevector.hpp"
#include "support/reference.hpp"

using namespace qcut;

namespace {

// Textbook single-target e^{-i beta X}: the obvious pair loop, no blocking.
ref::CVec rotate_target(ref::CVec v, std::size_t t, double beta) {
    const std::complex<double> c(std::cos(beta), 0.0), s(0.0, -std::sin(beta));
    const std::size_t half = std::size_t{1} << t;
    for (std::size_t z = 0; z < v.size(); ++z) {
        if (z & half) continue;
        const auto a0 = v[z], a1 = v[z | half];
        v[z] = c * a0 + s * a1;
        v[z | half] = s * a0 + c * a1;
    }
    return v;
}

Assignment bits_of(std::size_t z, std::size_t n) {
    Assignment a(n);
    for (std::size_t v = 0; v < n; ++v) a.bits[v] = (z >> v) & 1;
    return a;
}

}  // namespace

TEST_CASE("plus state is the uniform superposition") {
    auto s1 = plus_state(1);
    REQUIRE(s1.size() == 2);
    REQUIRE(s1.amps[0].real() == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    auto s3 = plus_state(3);
    REQUIRE(s3.qubits() == 3);
    for (const auto& a : s3.amps) {
        REQUIRE(a.real() == Catch::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-14));
        REQUIRE(a.imag() == 0.0);
    }
    REQUIRE(norm_sq(s3) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE_THROWS_AS(plus_state(0), config_error);
    REQUIRE_THROWS_AS(plus_state(kQubitCap + 1), resource_error);
    REQUIRE_THROWS_AS(plus_state(15, 14), resource_error);
}

TEST_CASE("cost table reproduces the reference cut for every basis state") {
    Graph unit = generate_er_graph(8, 0.5, 1);
    CostTable ti(unit);
    REQUIRE(ti.integral());
    REQUIRE(ti.levels().size() == 256);
    for (std::size_t z = 0; z < ti.size(); ++z)
        REQUIRE(ti.value(z) == ref::cut_value(unit, bits_of(z, 8)));
    REQUIRE(ti.max_value() == ref::enumerate_max_cut(unit).value);

    Graph frac(5);
    frac.add_edge(0, 1, 0.37);
    frac.add_edge(1, 3, 1.25);
    frac.add_edge(2, 4, 0.5);
    CostTable tf(frac);
    REQUIRE_FALSE(tf.integral());
    REQUIRE(tf.values().size() == 32);
    for (std::size_t z = 0; z < tf.size(); ++z)
        REQUIRE(tf.value(z) == Catch::Approx(ref::cut_value(frac, bits_of(z, 5))).margin(1e-12));
}

TEST_CASE("cost table falls back to raw values when levels overflow 16 bits") {
    Graph heavy(4);
    heavy.add_edge(0, 1, 40000.0);
    heavy.add_edge(2, 3, 40000.0);
    CostTable t(heavy);
    REQUIRE_FALSE(t.integral());  // total 80000 cannot level through uint16
    for (std::size_t z = 0; z < t.size(); ++z)
        REQUIRE(t.value(z) == ref::cut_value(heavy, bits_of(z, 4)));
}

TEST_CASE("cost table rejects empty graphs and cap violations") {
    REQUIRE_THROWS_AS(CostTable(Graph(0)), config_error);
    REQUIRE_THROWS_AS(CostTable(generate_er_graph(10, 0.2, 0), 8), resource_error);
}

TEST_CASE("zero-angle phase layer is an exact identity") {
    Graph g = generate_er_graph(6, 0.5, 2);
    auto s = plus_state(6);
    auto before = s.amps;
    apply_cost_layer(s, g, 0.0);
    REQUIRE(s.amps == before);
}

TEST_CASE("phase layer on one edge at gamma=pi flips the cut states") {
    Graph g(2);
    g.add_edge(0, 1);
    auto s = plus_state(2);
    apply_cost_layer(s, g, 3.14159265358979323846);
    REQUIRE(s.amps[0].real() == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(s.amps[1].real() == Catch::Approx(-0.5).margin(1e-12));
    REQUIRE(s.amps[2].real() == Catch::Approx(-0.5).margin(1e-12));
    REQUIRE(s.amps[3].real() == Catch::Approx(0.5).margin(1e-12));
    for (const auto& a : s.amps) REQUIRE(std::abs(a.imag()) < 1e-12);
}

TEST_CASE("phase layer matches the dense diagonal, integral and not") {
    Graph unit = generate_er_graph(8, 0.5, 0);
    auto s = plus_state(8);
    apply_cost_layer(s, unit, 0.7);
    auto expect = ref::mat_vec(ref::dense_cost_matrix(unit, 0.7), ref::plus_vector(8));
    for (std::size_t z = 0; z < s.size(); ++z)
        REQUIRE(std::abs(s.amps[z] - expect[z]) < 1e-10);

    Graph frac(6);
    frac.add_edge(0, 3, 0.61);
    frac.add_edge(1, 2, 1.4);
    frac.add_edge(4, 5, 0.09);
    frac.add_edge(0, 5, 2.5);
    StateVector r;
    r.amps = ref::random_state(6, 11);
    auto rin = r.amps;
    apply_cost_layer(r, frac, 1.3);
    auto expect2 = ref::mat_vec(ref::dense_cost_matrix(frac, 1.3), rin);
    for (std::size_t z = 0; z < r.size(); ++z)
        REQUIRE(std::abs(r.amps[z] - expect2[z]) < 1e-10);
}

TEST_CASE("zero-angle mixer is an exact identity") {
    StateVector s;
    s.amps = ref::random_state(7, 3);
    auto before = s.amps;
    apply_mixer_layer(s, 0.0);
    REQUIRE(s.amps == before);
}

TEST_CASE("mixer at beta=pi/2 maps |0> to -i|1>") {
    StateVector s;
    s.amps = {{1.0, 0.0}, {0.0, 0.0}};
    apply_mixer_layer(s, 1.5707963267948966);
    REQUIRE(std::abs(s.amps[0]) < 1e-12);
    REQUIRE(std::abs(s.amps[1] - std::complex<double>(0.0, -1.0)) < 1e-12);
}

TEST_CASE("mixer layer matches the dense Kronecker product") {
    StateVector s;
    s.amps = ref::random_state(6, 42);
    auto expect = ref::mat_vec(ref::dense_mixer_matrix(6, 0.3), s.amps);
    apply_mixer_layer(s, 0.3);
    for (std::size_t z = 0; z < s.size(); ++z)
        REQUIRE(std::abs(s.amps[z] - expect[z]) < 1e-10);
}

TEST_CASE("mixer blocking is invisible above the chunk width") {
    // 13 qubits exercises both the in-chunk targets and the streaming ones.
    StateVector s;
    s.amps = ref::random_state(13, 5);
    auto expect = s.amps;
    for (std::size_t t = 0; t < 13; ++t) expect = rotate_target(std::move(expect), t, 0.77);
    apply_mixer_layer(s, 0.77, 2);
    for (std::size_t z = 0; z < s.size(); ++z)
        REQUIRE(std::abs(s.amps[z] - expect[z]) < 1e-12);
}

TEST_CASE("layers preserve the norm") {
    Graph g = generate_er_graph(10, 0.4, 6);
    auto s = plus_state(10);
    for (int l = 0; l < 4; ++l) {
        apply_cost_layer(s, g, 0.3 + 0.2 * l);
        apply_mixer_layer(s, 1.1 - 0.2 * l);
    }
    REQUIRE(std::abs(norm_sq(s) - 1.0) < 1e-12);
}

TEST_CASE("uniform-state expectation is half the total weight") {
    for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
        Graph g = generate_er_graph(9, 0.5, seed);
        CostTable t(g);
        auto s = plus_state(9);
        REQUIRE(expectation(s, t) == Catch::Approx(g.total_weight() / 2.0).margin(1e-9));
    }
}

TEST_CASE("expectation matches a direct dense sum on a random state") {
    Graph g = generate_er_graph(7, 0.5, 8);
    CostTable t(g);
    StateVector s;
    s.amps = ref::random_state(7, 19);
    double direct = 0.0;
    for (std::size_t z = 0; z < s.size(); ++z)
        direct += std::norm(s.amps[z]) * ref::cut_value(g, bits_of(z, 7));
    REQUIRE(expectation(s, t) == Catch::Approx(direct).margin(1e-12));
}

TEST_CASE("reductions are bit-identical across thread counts") {
    Graph g = generate_er_graph(12, 0.3, 4);
    CostTable t(g);
    StateVector s;
    s.amps = ref::random_state(12, 23);
    const double e1 = expectation(s, t, 1);
    const double e4 = expectation(s, t, 4);
    REQUIRE(e1 == e4);
    REQUIRE(norm_sq(s, 1) == norm_sq(s, 4));

    auto a = s, b = s;
    apply_mixer_layer(a, 0.9, 1);
    apply_mixer_layer(b, 0.9, 4);
    REQUIRE(a.amps == b.amps);
    apply_cost_layer(a, t, 0.4, 1);
    apply_cost_layer(b, t, 0.4, 4);
    REQUIRE(a.amps == b.amps);
}

TEST_CASE("complement symmetry of probabilities survives both layers") {
    Graph g = generate_er_graph(6, 0.6, 9);
    auto s = plus_state(6);
    apply_cost_layer(s, g, 0.8);
    apply_mixer_layer(s, 0.5);
    apply_cost_layer(s, g, 0.2);
    apply_mixer_layer(s, 1.2);
    const std::size_t full = s.size() - 1;
    for (std::size_t z = 0; z < s.size(); ++z)
        REQUIRE(std::abs(std::norm(s.amps[z]) - std::norm(s.amps[z ^ full])) < 1e-12);
}

TEST_CASE("size mismatches between state and table are rejected") {
    Graph g = generate_er_graph(5, 0.5, 0);
    CostTable t(g);
    auto s = plus_state(6);
    REQUIRE_THROWS_AS(apply_cost_layer(s, t, 0.1), config_error);
    REQUIRE_THROWS_AS(expectation(s, t), config_error);
}
