#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;

namespace {

MeasuredWalk grover_walk(int n) {
    auto g = hypercube(n);
    auto coin = grover_coin(n);
    const std::uint32_t final_vertex = (1u << n) - 1;
    return make_measured_walk(std::move(g), std::move(coin), final_vertex);
}

MeasuredWalk dft_walk(int n) {
    auto g = hypercube(n);
    auto coin = dft_coin(n);
    return make_measured_walk(std::move(g), std::move(coin), (1u << n) - 1);
}

} // namespace

TEST_CASE("symmetric initial state spreads over the coin directions") {
    const auto g2 = hypercube(2);
    const auto s = symmetric_initial_state(g2, 0);
    const double amp = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.amplitudes()[0] - Complex(amp, 0)) < 1e-15);
    CHECK(std::abs(s.amplitudes()[1] - Complex(amp, 0)) < 1e-15);
    CHECK(s.amplitudes().tail(6).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));

    const auto g4 = hypercube(4);
    const auto s4 = symmetric_initial_state(g4, 0);
    int nonzero = 0;
    for (Index k = 0; k < s4.size(); ++k) {
        if (std::abs(s4.amplitudes()[k]) > 0) {
            ++nonzero;
            CHECK(std::abs(s4.amplitudes()[k] - Complex(0.5, 0)) < 1e-15);
        }
    }
    CHECK(nonzero == 4);
    CHECK(symmetric_initial_state(g4, 7).norm_squared() ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolution operator moves basis states along labeled edges") {
    // n = 1, scalar coin: a single deterministic hop.
    const auto w1 = make_measured_walk(hypercube(1), grover_coin(1), 1);
    Vector e0 = Vector::Zero(2);
    e0[0] = Complex(1, 0);
    const Vector moved = w1.evolution.sparse() * e0;
    CHECK(std::abs(moved[1] - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(moved[0]) < 1e-15);

    // n = 2 Grover coin swaps the two directions, then the shift moves along
    // the new label: |vertex 0, coin 0> -> |vertex 2, coin 1>.
    const auto w2 = grover_walk(2);
    Vector basis = Vector::Zero(8);
    basis[0] = Complex(1, 0);
    const Vector stepped = w2.evolution.sparse() * basis;
    for (Index k = 0; k < 8; ++k) {
        const Complex expected = k == 2 * 2 + 1 ? Complex(1, 0) : Complex(0, 0);
        CHECK(std::abs(stepped[k] - expected) < 1e-15);
    }

    // Product of unitaries stays unitary.
    const auto w4 = dft_walk(4);
    CHECK(w4.evolution.unitarity_defect() < 1e-12);

    // Exactly degree-many nonzeros per column.
    const auto& u = w2.evolution.sparse();
    for (int col = 0; col < u.outerSize(); ++col) {
        int count = 0;
        for (SparseMatrix::InnerIterator it(u, col); it; ++it) ++count;
        CHECK(count == 2);
    }
}

TEST_CASE("shift operator is an involution") {
    for (int n : {2, 3, 4}) {
        const auto g = hypercube(n);
        // Extract S as U with the identity coin.
        const auto shift = evolution_operator(
            g, UnitaryMatrix(SparseMatrix(DenseMatrix::Identity(n, n).sparseView())));
        const DenseMatrix s = shift.dense();
        CHECK((s * s - DenseMatrix::Identity(s.rows(), s.cols()))
                  .cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("evolution operator rejects mismatched and invalid inputs") {
    CHECK_THROWS_AS(evolution_operator(hypercube(3), grover_coin(2)),
                    ConfigurationError);
    // An improper labeling must not enter walk construction.
    const LabeledGraph broken(3, 1, {1, 2, 0});
    CHECK_THROWS_AS(evolution_operator(broken, grover_coin(1)), ConfigurationError);
}

TEST_CASE("first crossing series: deterministic single hop") {
    const auto w = make_measured_walk(hypercube(1), grover_coin(1), 1);
    const auto s = first_crossing_series(w, symmetric_initial_state(w.graph, 0),
                                         100, 1e-6);
    REQUIRE(s.length() == 1);
    CHECK(s.probabilities()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.converged());

    const auto est = hitting_time_estimate(s);
    CHECK(est.tau_est == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(est.stopping_time == 1);
    CHECK(est.absorbed == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("first crossing series: grover absorbs fully") {
    const auto w = grover_walk(2);
    const auto s = first_crossing_series(w, symmetric_initial_state(w.graph, 0),
                                         10000, 1e-6);
    CHECK(s.converged());
    CHECK(s.absorbed() > 1.0 - 1e-6);
    CHECK(s.length() < 10000);
}

TEST_CASE("first crossing series: dft walk plateaus short of one") {
    const auto w = dft_walk(4);
    const auto s = first_crossing_series(w, symmetric_initial_state(w.graph, 0),
                                         50000, 1e-9);
    CHECK(!s.converged());
    CHECK(s.absorbed() == doctest::Approx(0.5714).epsilon(2e-3));

    // With epsilon = 0.3 the threshold 0.7 is unreachable: sentinel result.
    const auto short_series = first_crossing_series(
        w, symmetric_initial_state(w.graph, 0), 20000, 0.3);
    const auto est = hitting_time_estimate(short_series);
    CHECK(!est.converged);
    CHECK(est.stopping_time == 20000);
    CHECK(est.absorbed < 0.7);
}

TEST_CASE("first crossing series rejects bad inputs") {
    const auto w = grover_walk(2);
    const auto start = symmetric_initial_state(w.graph, 0);
    CHECK_THROWS_AS(first_crossing_series(w, symmetric_initial_state(w.graph, 3),
                                          100, 1e-6),
                    ConfigurationError); // start == final
    CHECK_THROWS_AS(first_crossing_series(w, start, 0, 1e-6), ConfigurationError);
    CHECK_THROWS_AS(first_crossing_series(w, start, 100, 0.0), ConfigurationError);
    CHECK_THROWS_AS(first_crossing_series(w, start, 100, 1.5), ConfigurationError);
    CHECK_THROWS_AS(
        first_crossing_series(w, WalkState(Vector::Zero(8)), 100, 1e-6),
        ConfigurationError); // unnormalized
}

TEST_CASE("norm bookkeeping: surviving mass plus absorbed mass is one") {
    for (int n : {2, 3}) {
        const auto w = grover_walk(n);
        const auto absorbing = w.absorbing_indices();
        Vector branch = symmetric_initial_state(w.graph, 0).amplitudes();
        double cumulative = 0.0;
        for (int t = 1; t <= 40; ++t) {
            branch = w.evolution.sparse() * branch;
            for (Index k : absorbing) {
                cumulative += std::norm(branch[k]);
                branch[k] = Complex(0, 0);
            }
            CHECK(std::abs(branch.squaredNorm() + cumulative - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("pure-state series equals the density-matrix form") {
    for (int n : {1, 2, 3}) {
        const auto w = n == 2 ? grover_walk(2) : (n == 3 ? dft_walk(3) : grover_walk(1));
        const auto psi0 = symmetric_initial_state(w.graph, 0);
        const auto absorbing = w.absorbing_indices();
        const auto series = first_crossing_series(w, psi0, 30, 1e-12);

        const DenseMatrix rho0 = psi0.amplitudes() * psi0.amplitudes().adjoint();
        oracles::DensityWalk oracle(w.evolution.dense(), absorbing, rho0);
        for (long t = 0; t < series.length(); ++t) {
            const double expected = oracle.step();
            CHECK(std::abs(series.probabilities()[std::size_t(t)] - expected) < 1e-12);
        }
    }
}

TEST_CASE("bipartite parity forces exact zeros at wrong-parity steps") {
    for (int n : {2, 3, 4}) {
        const auto w = grover_walk(n);
        const auto s = first_crossing_series(w, symmetric_initial_state(w.graph, 0),
                                             60, 1e-12);
        for (long t = 1; t <= s.length(); ++t) {
            if ((t - n) % 2 != 0) {
                CHECK(s.probabilities()[std::size_t(t - 1)] == 0.0);
            }
        }
    }
}

TEST_CASE("one-shot hitting time") {
    const auto w1 = make_measured_walk(hypercube(1), grover_coin(1), 1);
    CHECK(one_shot_hitting_time(w1, symmetric_initial_state(w1.graph, 0), 0.99, 10) == 1);

    const auto w4 = grover_walk(4);
    const auto psi0 = symmetric_initial_state(w4.graph, 0);
    const auto hit = one_shot_hitting_time(w4, psi0, 0.1, 100);
    REQUIRE(hit.has_value());
    CHECK(*hit <= 100);

    CHECK(!one_shot_hitting_time(w4, psi0, 1.0, 50).has_value());
    CHECK_THROWS_AS(one_shot_hitting_time(w4, psi0, 0.0, 50), ConfigurationError);
    CHECK_THROWS_AS(one_shot_hitting_time(w4, psi0, 1.5, 50), ConfigurationError);
}

TEST_CASE("one-shot and measured protocols genuinely differ") {
    for (int n : {2, 3}) {
        const auto w = grover_walk(n);
        const auto psi0 = symmetric_initial_state(w.graph, 0);
        const auto absorbing = w.absorbing_indices();
        const auto series = first_crossing_series(w, psi0, 30, 1e-12);

        Vector unmeasured = psi0.amplitudes();
        double worst = 0.0;
        for (long t = 1; t <= series.length(); ++t) {
            unmeasured = w.evolution.sparse() * unmeasured;
            double arrival = 0.0;
            for (Index k : absorbing) arrival += std::norm(unmeasured[k]);
            worst = std::max(worst,
                             std::abs(arrival - series.probabilities()[std::size_t(t - 1)]));
        }
        CHECK(worst > 1e-6);
    }
}

TEST_CASE("concurrent hitting time") {
    const auto w1 = make_measured_walk(hypercube(1), grover_coin(1), 1);
    const auto s1 = first_crossing_series(w1, symmetric_initial_state(w1.graph, 0),
                                          10, 1e-9);
    CHECK(concurrent_hitting_time(s1, 0.5) == 1);

    const auto w4 = dft_walk(4);
    const auto s4 = first_crossing_series(w4, symmetric_initial_state(w4.graph, 0),
                                          50000, 1e-9);
    CHECK(!concurrent_hitting_time(s4, 0.6).has_value());
    CHECK_THROWS_AS(concurrent_hitting_time(s4, 0.0), ConfigurationError);
}
