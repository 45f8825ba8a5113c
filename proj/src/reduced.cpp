#include "qwalk/reduced.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

void check_reduced_dimension(int n) {
    if (n < 2) {
        throw ConfigurationError("reduced walk: dimension must be >= 2, got " +
                                 std::to_string(n));
    }
}

} // namespace

ReducedBasis::ReducedBasis(int n) : n_(n) { check_reduced_dimension(n); }

Index ReducedBasis::up_index(int weight) const {
    if (weight < 0 || weight >= n_) {
        throw ConfigurationError("ReducedBasis: no up state at weight " +
                                 std::to_string(weight));
    }
    return weight == 0 ? 0 : 2 * Index(weight);
}

Index ReducedBasis::down_index(int weight) const {
    if (weight < 1 || weight > n_) {
        throw ConfigurationError("ReducedBasis: no down state at weight " +
                                 std::to_string(weight));
    }
    return 2 * Index(weight) - 1;
}

ReducedOperators reduced_operators(int n) {
    check_reduced_dimension(n);
    const ReducedBasis basis(n);
    const Index dim = basis.size();

    std::vector<Triplet> shift;
    shift.reserve(std::size_t(dim));
    for (int x = 0; x < n; ++x) {
        const Index up = basis.up_index(x);
        const Index down = basis.down_index(x + 1);
        shift.emplace_back(down, up, Complex(1.0, 0.0));
        shift.emplace_back(up, down, Complex(1.0, 0.0));
    }
    SparseMatrix shift_m(dim, dim);
    shift_m.setFromTriplets(shift.begin(), shift.end());

    std::vector<Triplet> coin;
    coin.reserve(std::size_t(dim) * 2);
    for (int x = 0; x <= n; ++x) {
        const double c = 1.0 - 2.0 * double(x) / double(n);
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        const bool has_up = x < n;
        const bool has_down = x > 0;
        if (has_up && has_down) {
            const Index up = basis.up_index(x);
            const Index down = basis.down_index(x);
            coin.emplace_back(down, down, Complex(-c, 0.0));
            coin.emplace_back(up, down, Complex(s, 0.0));
            coin.emplace_back(down, up, Complex(s, 0.0));
            coin.emplace_back(up, up, Complex(c, 0.0));
        } else if (has_up) {
            // weight 0: cos = 1, the lone up state is fixed
            coin.emplace_back(basis.up_index(x), basis.up_index(x), Complex(c, 0.0));
        } else {
            // weight n: cos = -1, the lone down state is fixed
            coin.emplace_back(basis.down_index(x), basis.down_index(x), Complex(-c, 0.0));
        }
    }
    SparseMatrix coin_m(dim, dim);
    coin_m.setFromTriplets(coin.begin(), coin.end());

    return ReducedOperators{UnitaryMatrix(std::move(shift_m)),
                            UnitaryMatrix(std::move(coin_m))};
}

UnitaryMatrix reduced_evolution(int n) {
    const ReducedOperators ops = reduced_operators(n);
    SparseMatrix u = (ops.shift.sparse() * ops.coin.sparse()).pruned();
    return UnitaryMatrix(std::move(u));
}

HittingResult reduced_hitting_time(int n, Method method, double epsilon,
                                   long t_max, Index budget) {
    check_reduced_dimension(n);
    const ReducedBasis basis(n);
    const UnitaryMatrix evolution = reduced_evolution(n);
    const Index absorbing[] = {basis.down_index(n)};
    Vector start = Vector::Zero(basis.size());
    start[basis.up_index(0)] = Complex(1.0, 0.0);

    if (method == Method::Iterative) {
        const auto series = first_crossing_series(evolution.sparse(), absorbing,
                                                  start, t_max, epsilon);
        const auto estimate = hitting_time_estimate(series);
        HittingResult result;
        result.method = Method::Reduced;
        result.tau = estimate.tau_est;
        result.absorption = estimate.absorbed;
        result.finite = estimate.converged;
        result.tolerances.epsilon = epsilon;
        result.tolerances.t_max = t_max;
        return result;
    }
    if (method != Method::ClosedForm) {
        throw ConfigurationError("reduced_hitting_time: method must be ClosedForm or Iterative");
    }
    const auto pair = build_superoperators(evolution.sparse(), absorbing, budget);
    DenseMatrix rho0 = DenseMatrix::Zero(basis.size(), basis.size());
    rho0(basis.up_index(0), basis.up_index(0)) = Complex(1.0, 0.0);
    HittingResult result = closed_form_hitting_time(pair, rho0);
    result.method = Method::Reduced;
    return result;
}

WalkState embed_reduced_state(int n, const Vector& v) {
    check_reduced_dimension(n);
    if (n > 26) {
        throw ConfigurationError("embed_reduced_state: full space too large for n = " +
                                 std::to_string(n));
    }
    const ReducedBasis basis(n);
    if (v.size() != basis.size()) {
        throw ConfigurationError("embed_reduced_state: vector length " +
                                 std::to_string(v.size()) + ", expected " +
                                 std::to_string(basis.size()));
    }
    const std::uint32_t n_vertices = 1u << n;
    Vector amps = Vector::Zero(Index(n_vertices) * n);

    // Precompute per-weight scale factors 1/sqrt(#pairs at that weight).
    std::vector<double> up_scale(std::size_t(n) + 1, 0.0);
    std::vector<double> down_scale(std::size_t(n) + 1, 0.0);
    std::vector<double> choose(std::size_t(n) + 1, 0.0);
    choose[0] = 1.0;
    for (int x = 1; x <= n; ++x) {
        choose[std::size_t(x)] =
            choose[std::size_t(x - 1)] * double(n - x + 1) / double(x);
    }
    for (int x = 0; x <= n; ++x) {
        if (x < n) up_scale[std::size_t(x)] = 1.0 / std::sqrt(choose[std::size_t(x)] * double(n - x));
        if (x > 0) down_scale[std::size_t(x)] = 1.0 / std::sqrt(choose[std::size_t(x)] * double(x));
    }

    for (std::uint32_t vertex = 0; vertex < n_vertices; ++vertex) {
        const int weight = std::popcount(vertex);
        const Complex up_amp =
            weight < n ? v[basis.up_index(weight)] * up_scale[std::size_t(weight)]
                       : Complex(0.0, 0.0);
        const Complex down_amp =
            weight > 0 ? v[basis.down_index(weight)] * down_scale[std::size_t(weight)]
                       : Complex(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            const bool bit_set = (vertex >> j) & 1u;
            amps[Index(vertex) * n + j] = bit_set ? down_amp : up_amp;
        }
    }
    return WalkState(std::move(amps));
}

} // namespace qwalk
