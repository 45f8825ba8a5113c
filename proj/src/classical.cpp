#include "qwalk/classical.hpp"

#include <cmath>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "qwalk/errors.hpp"
#include "qwalk/types.hpp"

namespace qwalk {

namespace {

void check_dimension(int n) {
    if (n < 1) {
        throw ConfigurationError("classical hitting time: dimension must be >= 1");
    }
    if (n > 64) {
        throw PrecisionError("classical hitting time: dimension " + std::to_string(n) +
                             " overflows double precision; use a big-number mode");
    }
}

// C(n, k) as long double via a running product; exact integers below n = 30.
long double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0L;
    if (k > n - k) k = n - k;
    if (n < 30) {
        unsigned long long value = 1;
        for (int i = 1; i <= k; ++i) {
            value = value * (unsigned long long)(n - k + i) / i;
        }
        return (long double)value;
    }
    long double value = 1.0L;
    for (int i = 1; i <= k; ++i) {
        value *= (long double)(n - k + i);
        value /= (long double)i;
    }
    return value;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    // splitmix64 of (seed, trial) -> independent per-trial streams.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return std::mt19937_64(z ^ (z >> 31));
}

} // namespace

ClassicalHittingProfile classical_hitting_recursion(int n) {
    check_dimension(n);
    // Difference form: delta(x) = tau(x) - tau(x+1) satisfies
    // (n - x) delta(x) = x delta(x-1) + n with delta(0) = 1. All terms are
    // positive, so the forward sweep loses nothing to cancellation.
    std::vector<long double> delta(std::size_t(n));
    delta[0] = 1.0L;
    for (int x = 1; x < n; ++x) {
        delta[std::size_t(x)] =
            ((long double)x * delta[std::size_t(x - 1)] + (long double)n) /
            (long double)(n - x);
    }
    ClassicalHittingProfile profile;
    profile.n = n;
    profile.tau_by_weight.assign(std::size_t(n) + 1, 0.0);
    long double tail = 0.0L;
    for (int x = n - 1; x >= 0; --x) {
        tail += delta[std::size_t(x)];
        profile.tau_by_weight[std::size_t(x)] = double(tail);
    }
    return profile;
}

double classical_hitting_closed(int n) {
    check_dimension(n);
    // tau(0) = sum_x (1 + sum_{k=1..x} C(n, k)) / C(n-1, x)
    long double total = 0.0L, carry = 0.0L;
    for (int x = 0; x < n; ++x) {
        long double numerator = 1.0L;
        for (int k = 1; k <= x; ++k) {
            numerator += binomial(n, k);
        }
        const long double term = numerator / binomial(n - 1, x) - carry;
        const long double updated = total + term;
        carry = (updated - total) - term;
        total = updated;
    }
    return double(total);
}

MonteCarloResult classical_monte_carlo(const LabeledGraph& g, std::uint32_t v0,
                                       std::uint32_t vf, long trials,
                                       std::uint64_t seed, long step_cap) {
    if (trials < 1) {
        throw ConfigurationError("classical_monte_carlo: trials must be >= 1");
    }
    if (v0 >= g.n_vertices() || vf >= g.n_vertices()) {
        throw ConfigurationError("classical_monte_carlo: vertex out of range");
    }
    if (!validate_labeling(g).empty()) {
        throw ConfigurationError("classical_monte_carlo: graph fails labeling validation");
    }

    double sum = 0.0;
    double sum_squares = 0.0;
    long finished = 0;
    long censored = 0;
    std::uniform_int_distribution<std::uint32_t> pick(0, g.degree() - 1);
    for (long trial = 0; trial < trials; ++trial) {
        auto rng = trial_rng(seed, std::uint64_t(trial));
        std::uint32_t v = v0;
        long steps = 0;
        while (v != vf && steps < step_cap) {
            v = g.neighbor(v, pick(rng));
            ++steps;
        }
        if (v != vf) {
            ++censored;
            continue;
        }
        sum += double(steps);
        sum_squares += double(steps) * double(steps);
        ++finished;
    }

    MonteCarloResult result;
    result.trials = trials;
    result.censored = censored;
    if (finished == 0) {
        throw NumericalError("classical_monte_carlo: every trial hit the step cap of " +
                             std::to_string(step_cap));
    }
    result.mean = sum / double(finished);
    if (finished > 1) {
        const double variance =
            (sum_squares - sum * sum / double(finished)) / double(finished - 1);
        result.std_error = std::sqrt(std::max(variance, 0.0) / double(finished));
    }
    return result;
}

double classical_hitting_graph(const LabeledGraph& g, std::uint32_t v0,
                               std::uint32_t vf) {
    if (v0 >= g.n_vertices() || vf >= g.n_vertices()) {
        throw ConfigurationError("classical_hitting_graph: vertex out of range");
    }
    if (!validate_labeling(g).empty()) {
        throw ConfigurationError("classical_hitting_graph: graph fails labeling validation");
    }
    if (v0 == vf) return 0.0;

    // Restrict the linear system to the component of vf; anything outside it
    // can never arrive.
    std::vector<Index> row_of(g.n_vertices(), -1);
    std::vector<std::uint32_t> component;
    {
        std::queue<std::uint32_t> queue;
        queue.push(vf);
        std::vector<char> seen(g.n_vertices(), 0);
        seen[vf] = 1;
        while (!queue.empty()) {
            const std::uint32_t v = queue.front();
            queue.pop();
            component.push_back(v);
            for (std::uint32_t j = 0; j < g.degree(); ++j) {
                const std::uint32_t u = g.neighbor(v, j);
                if (!seen[u]) {
                    seen[u] = 1;
                    queue.push(u);
                }
            }
        }
    }
    Index rows = 0;
    for (std::uint32_t v : component) {
        if (v != vf) row_of[v] = rows++;
    }
    if (row_of[v0] == -1) {
        throw ConfigurationError("classical_hitting_graph: final vertex unreachable from start");
    }

    const double inv_d = 1.0 / double(g.degree());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(std::size_t(rows) * (g.degree() + 1));
    for (std::uint32_t v : component) {
        if (v == vf) continue;
        const Index r = row_of[v];
        triplets.emplace_back(r, r, 1.0);
        for (std::uint32_t j = 0; j < g.degree(); ++j) {
            const std::uint32_t u = g.neighbor(v, j);
            if (u != vf) {
                triplets.emplace_back(r, row_of[u], -inv_d);
            }
        }
    }
    Eigen::SparseMatrix<double> system(rows, rows);
    system.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(rows);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
    solver.compute(system);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("classical_hitting_graph: singular absorbing-chain system");
    }
    Eigen::VectorXd h = solver.solve(rhs);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("classical_hitting_graph: linear solve failed");
    }
    return h[row_of[v0]];
}

} // namespace qwalk
