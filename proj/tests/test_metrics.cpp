// Scoring: approximation ratio, time-efficiency factor, combined index.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qcut/metrics.hpp"

using namespace qcut;

TEST_CASE("approximation ratio is the plain quotient") {
    REQUIRE(approximation_ratio(9.0, 10.0) == 0.9);
    REQUIRE(approximation_ratio(3.0, 4.0) == 0.75);
    REQUIRE(approximation_ratio(7.0, 7.0) == 1.0);
    REQUIRE(approximation_ratio(11.0, 10.0) > 1.0);  // heuristic baseline beaten
    REQUIRE(approximation_ratio(0.0, 5.0) == 0.0);
    REQUIRE_THROWS_AS(approximation_ratio(1.0, 0.0), config_error);
    REQUIRE_THROWS_AS(approximation_ratio(1.0, -2.0), config_error);
}

TEST_CASE("equal runtimes score exactly one half") {
    for (double t : {0.0, 0.5, 3.0, 1e6})
        for (double alpha : {0.01, 0.1, 1.0})
            REQUIRE(efficiency_factor(t, t, alpha) == 0.5);
}

TEST_CASE("efficiency factor hits the closed-form logistic values") {
    const double ln3 = std::log(3.0);
    REQUIRE(efficiency_factor(ln3, 0.0, 1.0) == Catch::Approx(0.25).margin(1e-12));
    REQUIRE(efficiency_factor(0.0, ln3, 1.0) == Catch::Approx(0.75).margin(1e-12));
    REQUIRE(efficiency_factor(10.0, 0.0, 0.1) == Catch::Approx(1.0 / (1.0 + std::exp(1.0))).margin(1e-12));
}

TEST_CASE("efficiency depends only on the runtime difference") {
    for (double shift : {0.0, 1.0, 250.0})
        REQUIRE(efficiency_factor(2.0 + shift, 5.0 + shift, 0.3) ==
                efficiency_factor(2.0, 5.0, 0.3));
}

TEST_CASE("efficiency falls with algorithm time and rises with baseline time") {
    double prev = 1.0;
    for (double t = 0.0; t <= 20.0; t += 0.5) {
        const double ef = efficiency_factor(t, 10.0, 0.5);
        REQUIRE(ef < prev);
        REQUIRE(ef > 0.0);
        REQUIRE(ef < 1.0);
        prev = ef;
    }
    prev = 0.0;
    for (double b = 0.0; b <= 20.0; b += 0.5) {
        const double ef = efficiency_factor(10.0, b, 0.5);
        REQUIRE(ef > prev);
        prev = ef;
    }
}

TEST_CASE("extreme runtime gaps saturate instead of overflowing") {
    const double lo = efficiency_factor(1e9, 0.0, 1.0);
    REQUIRE(std::isfinite(lo));
    REQUIRE(lo > 0.0);
    REQUIRE(lo < 1e-100);
    const double hi = efficiency_factor(0.0, 1e9, 1.0);
    REQUIRE(std::isfinite(hi));
    // exp(-700) underflows the double ulp at 1.0, so the factor saturates to exactly 1
    REQUIRE(hi <= 1.0);
    REQUIRE(hi >= 1.0 - 1e-12);
}

TEST_CASE("bad efficiency inputs are rejected") {
    REQUIRE_THROWS_AS(efficiency_factor(1.0, 1.0, 0.0), config_error);
    REQUIRE_THROWS_AS(efficiency_factor(1.0, 1.0, -0.1), config_error);
    REQUIRE_THROWS_AS(efficiency_factor(-1.0, 1.0, 0.1), config_error);
    REQUIRE_THROWS_AS(efficiency_factor(1.0, -1.0, 0.1), config_error);
}

TEST_CASE("combined index is ratio times efficiency on a 0-100 scale") {
    REQUIRE(performance_efficiency_index(0.9, 0.5) == 45.0);
    REQUIRE(performance_efficiency_index(1.0, 1.0) == 100.0);
    REQUIRE(performance_efficiency_index(0.75, 0.25) == Catch::Approx(18.75).margin(1e-12));
    REQUIRE(performance_efficiency_index(0.0, 0.5) == 0.0);
    double prev = -1.0;
    for (double ar = 0.0; ar <= 1.2; ar += 0.1) {
        const double pei = performance_efficiency_index(ar, 0.4);
        REQUIRE(pei > prev);
        prev = pei;
    }
    REQUIRE_THROWS_AS(performance_efficiency_index(-0.1, 0.5), config_error);
    REQUIRE_THROWS_AS(performance_efficiency_index(0.5, 0.0), config_error);
    REQUIRE_THROWS_AS(performance_efficiency_index(0.5, 1.5), config_error);
}
