#include <doctest.h>

#include <cmath>

#include "qwalk/classical.hpp"
#include "qwalk/errors.hpp"

using namespace qwalk;

TEST_CASE("recursion: small dimensions by hand") {
    CHECK(classical_hitting_recursion(1).tau_by_weight[0] == doctest::Approx(1.0));
    CHECK(classical_hitting_recursion(2).tau_by_weight[0] == doctest::Approx(4.0));
    // n = 4: deltas 1, 5/3, 11/3, 15 sum to 64/3.
    CHECK(classical_hitting_recursion(4).tau_by_weight[0] ==
          doctest::Approx(64.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("recursion profile is strictly decreasing with tau(n) = 0") {
    for (int n : {1, 2, 5, 10, 20}) {
        const auto profile = classical_hitting_recursion(n);
        REQUIRE(profile.tau_by_weight.size() == std::size_t(n) + 1);
        CHECK(profile.tau_by_weight[std::size_t(n)] == 0.0);
        for (int x = 0; x < n; ++x) {
            CHECK(profile.tau_by_weight[std::size_t(x)] >
                  profile.tau_by_weight[std::size_t(x) + 1]);
        }
    }
}

TEST_CASE("closed sum: small dimensions and agreement with the recursion") {
    CHECK(classical_hitting_closed(1) == doctest::Approx(1.0));
    // x = 0 contributes 1, x = 1 contributes (C(2,1) + 1) / C(1,1) = 3.
    CHECK(classical_hitting_closed(2) == doctest::Approx(4.0));
    for (int n = 1; n <= 20; ++n) {
        const double recursion = classical_hitting_recursion(n).tau_by_weight[0];
        const double closed = classical_hitting_closed(n);
        CHECK(std::abs(closed - recursion) <= 1e-9 * recursion);
    }
}

TEST_CASE("dimension guards") {
    CHECK_THROWS_AS(classical_hitting_recursion(0), ConfigurationError);
    CHECK_THROWS_AS(classical_hitting_closed(0), ConfigurationError);
    CHECK_THROWS_AS(classical_hitting_recursion(65), PrecisionError);
    CHECK_THROWS_AS(classical_hitting_closed(65), PrecisionError);
    // The top of the supported range still evaluates.
    CHECK(classical_hitting_recursion(64).tau_by_weight[0] > 0);
}

TEST_CASE("monte carlo: deterministic cases and reproducibility") {
    const auto g1 = hypercube(1);
    const auto exact = classical_monte_carlo(g1, 0, 1, 1000, 7);
    CHECK(exact.mean == 1.0);
    CHECK(exact.std_error == 0.0);
    CHECK(exact.censored == 0);

    const auto g2 = hypercube(2);
    const auto a = classical_monte_carlo(g2, 0, 3, 5000, 42);
    const auto b = classical_monte_carlo(g2, 0, 3, 5000, 42);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);

    CHECK_THROWS_AS(classical_monte_carlo(g2, 0, 3, 0, 1), ConfigurationError);
    CHECK_THROWS_AS(classical_monte_carlo(g2, 0, 9, 10, 1), ConfigurationError);
}

TEST_CASE("monte carlo agrees with the recursion at n = 2 and 10") {
    const auto g2 = hypercube(2);
    const auto mc2 = classical_monte_carlo(g2, 0, 3, 100000, 12345);
    CHECK(std::abs(mc2.mean - 4.0) <= 3.0 * mc2.std_error);

    const auto g10 = hypercube(10);
    const auto mc10 = classical_monte_carlo(g10, 0, 1023, 100000, 999);
    const double expected = classical_hitting_recursion(10).tau_by_weight[0];
    CHECK(std::abs(mc10.mean - expected) <= 3.0 * mc10.std_error);
}

TEST_CASE("graph solver matches the weight recursion on hypercubes") {
    CHECK(classical_hitting_graph(hypercube(1), 0, 1) == doctest::Approx(1.0));
    for (int n = 1; n <= 10; ++n) {
        const auto g = hypercube(n);
        const double from_graph =
            classical_hitting_graph(g, 0, g.n_vertices() - 1);
        const double from_recursion = classical_hitting_recursion(n).tau_by_weight[0];
        CHECK(std::abs(from_graph - from_recursion) <= 1e-9 * from_recursion);
    }
}

TEST_CASE("graph solver and monte carlo agree on the distorted hypercube") {
    const auto g3 = distorted_hypercube(3);
    const double exact3 = classical_hitting_graph(g3, 0, 7);
    const auto mc3 = classical_monte_carlo(g3, 0, 7, 100000, 31415);
    CHECK(std::abs(mc3.mean - exact3) <= 3.0 * mc3.std_error);

    const auto g4 = distorted_hypercube(4);
    const double exact4 = classical_hitting_graph(g4, 0, 15);
    const auto mc4 = classical_monte_carlo(g4, 0, 15, 100000, 2718);
    CHECK(std::abs(mc4.mean - exact4) <= 3.0 * mc4.std_error);
}

TEST_CASE("hitting time grows exponentially in the dimension") {
    double previous = 0.0;
    for (int n = 1; n <= 20; ++n) {
        const double tau = classical_hitting_recursion(n).tau_by_weight[0];
        CHECK(tau > previous);
        CHECK(tau >= std::pow(2.0, n) / double(n + 1));
        previous = tau;
    }
    for (int n = 10; n <= 18; ++n) {
        const double tau_n = classical_hitting_recursion(n).tau_by_weight[0];
        const double tau_n2 = classical_hitting_recursion(n + 2).tau_by_weight[0];
        CHECK(tau_n2 / tau_n > 2.0);
    }
}
