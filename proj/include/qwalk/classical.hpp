#pragma once

#include <cstdint>
#include <vector>

#include "qwalk/graph.hpp"

namespace qwalk {

// Expected steps for the uniform random walk on the n-hypercube to first
// reach the all-ones vertex, by Hamming weight of the start.
struct ClassicalHittingProfile {
    int n = 0;
    std::vector<double> tau_by_weight; // tau(0)..tau(n), tau(n) = 0
};

// Solves the weight recursion tau(x) = ((n-x)/n) tau(x+1) + (x/n) tau(x-1) + 1
// with tau(n) = 0, via the difference recursion and back-substitution.
// Supported for 1 <= n <= 64; long double accumulation keeps the binomial
// growth representable up to that size.
ClassicalHittingProfile classical_hitting_recursion(int n);

// Closed sum for tau(0) over weights; equals the recursion within 1e-9
// relative. Same range limits as the recursion.
double classical_hitting_closed(int n);

struct MonteCarloResult {
    double mean = 0.0;
    double std_error = 0.0;
    long trials = 0;
    long censored = 0; // trials cut off at the step cap (excluded from mean)
};

// Empirical mean first-passage time of the uniform random walk from v0 to vf.
// Each trial draws from its own counter-seeded stream, so results are
// reproducible for a fixed seed regardless of execution order.
MonteCarloResult classical_monte_carlo(const LabeledGraph& g, std::uint32_t v0,
                                       std::uint32_t vf, long trials,
                                       std::uint64_t seed,
                                       long step_cap = 100000000);

// Exact mean first-passage time on any validated graph: solves the absorbing
// chain system h(v) = 1 + (1/d) sum_j h(neighbor(v, j)) with h(vf) = 0.
double classical_hitting_graph(const LabeledGraph& g, std::uint32_t v0,
                               std::uint32_t vf);

} // namespace qwalk
