#include "qwalk/walk.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace qwalk {

WalkState symmetric_initial_state(const LabeledGraph& g, std::uint32_t v0) {
    if (v0 >= g.n_vertices()) {
        throw ConfigurationError("symmetric_initial_state: vertex " + std::to_string(v0) +
                                 " out of range");
    }
    const Index d = g.degree();
    Vector amps = Vector::Zero(Index(g.n_vertices()) * d);
    const double amplitude = 1.0 / std::sqrt(double(d));
    for (Index j = 0; j < d; ++j) {
        amps[Index(v0) * d + j] = amplitude;
    }
    return WalkState(std::move(amps));
}

UnitaryMatrix evolution_operator(const LabeledGraph& g, const UnitaryMatrix& coin) {
    if (coin.dim() != Index(g.degree())) {
        throw ConfigurationError("evolution_operator: coin dimension " +
                                 std::to_string(coin.dim()) + " != graph degree " +
                                 std::to_string(g.degree()));
    }
    if (!validate_labeling(g).empty()) {
        throw ConfigurationError("evolution_operator: graph fails labeling validation");
    }
    const Index d = g.degree();
    const Index dim = Index(g.n_vertices()) * d;

    // U |v, j> = sum_j' C(j', j) |neighbor(v, j'), j'>: the coin block acts at
    // v, then the shift routes each direction along its edge.
    std::vector<Triplet> triplets;
    triplets.reserve(std::size_t(g.n_vertices()) * coin.sparse().nonZeros());
    const DenseMatrix c = coin.dense();
    for (std::uint32_t v = 0; v < g.n_vertices(); ++v) {
        for (Index j = 0; j < d; ++j) {
            for (Index jp = 0; jp < d; ++jp) {
                if (c(jp, j) == Complex(0.0, 0.0)) continue;
                const Index row = Index(g.neighbor(v, std::uint32_t(jp))) * d + jp;
                triplets.emplace_back(row, Index(v) * d + j, c(jp, j));
            }
        }
    }
    SparseMatrix u(dim, dim);
    u.setFromTriplets(triplets.begin(), triplets.end());
    return UnitaryMatrix(std::move(u));
}

std::vector<Index> MeasuredWalk::absorbing_indices() const {
    const Index d = graph.degree();
    std::vector<Index> indices(d);
    for (Index j = 0; j < d; ++j) {
        indices[std::size_t(j)] = Index(final_vertex) * d + j;
    }
    return indices;
}

MeasuredWalk make_measured_walk(LabeledGraph g, UnitaryMatrix coin,
                                std::uint32_t final_vertex) {
    if (final_vertex >= g.n_vertices()) {
        throw ConfigurationError("make_measured_walk: final vertex " +
                                 std::to_string(final_vertex) + " out of range");
    }
    UnitaryMatrix evolution = evolution_operator(g, coin);
    return MeasuredWalk{std::move(g), std::move(coin), std::move(evolution), final_vertex};
}

FirstCrossingSeries::FirstCrossingSeries(std::vector<double> probabilities,
                                         long t_max, double epsilon, bool converged)
    : probabilities_(std::move(probabilities)), t_max_(t_max), epsilon_(epsilon),
      converged_(converged) {
    cumulative_.reserve(probabilities_.size());
    double total = 0.0;
    for (double p : probabilities_) {
        total += p;
        cumulative_.push_back(total);
    }
}

FirstCrossingSeries first_crossing_series(const SparseMatrix& step,
                                          std::span<const Index> absorbing,
                                          const Vector& psi0, long t_max,
                                          double epsilon) {
    if (t_max < 1) {
        throw ConfigurationError("first_crossing_series: t_max must be >= 1");
    }
    if (epsilon <= 0.0 || epsilon >= 1.0) {
        throw ConfigurationError("first_crossing_series: epsilon must lie in (0, 1)");
    }
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-9) {
        throw ConfigurationError("first_crossing_series: initial state is not normalized");
    }
    double start_mass = 0.0;
    for (Index k : absorbing) {
        start_mass += std::norm(psi0[k]);
    }
    if (start_mass > 1e-18) {
        throw ConfigurationError(
            "first_crossing_series: initial state overlaps the absorbing set");
    }

    std::vector<double> probabilities;
    Vector branch = psi0;
    Vector next(psi0.size());
    double cumulative = 0.0;
    bool converged = false;
    for (long t = 1; t <= t_max; ++t) {
        next.noalias() = step * branch;
        double arrived = 0.0;
        for (Index k : absorbing) {
            arrived += std::norm(next[k]);
            next[k] = Complex(0.0, 0.0);
        }
        probabilities.push_back(arrived);
        cumulative += arrived;
        branch.swap(next);
        if (cumulative > 1.0 - epsilon) {
            converged = true;
            break;
        }
    }
    return FirstCrossingSeries(std::move(probabilities), t_max, epsilon, converged);
}

FirstCrossingSeries first_crossing_series(const MeasuredWalk& w,
                                          const WalkState& psi0, long t_max,
                                          double epsilon) {
    if (psi0.size() != w.evolution.dim()) {
        throw ConfigurationError("first_crossing_series: state dimension mismatch");
    }
    const auto absorbing = w.absorbing_indices();
    return first_crossing_series(w.evolution.sparse(), absorbing,
                                 psi0.amplitudes(), t_max, epsilon);
}

HittingEstimate hitting_time_estimate(const FirstCrossingSeries& s) {
    if (s.length() == 0) {
        throw ConfigurationError("hitting_time_estimate: empty series");
    }
    HittingEstimate est;
    const auto& p = s.probabilities();
    // Kahan-compensated sum; the tail terms t * p(t) can be many orders of
    // magnitude below the head.
    double sum = 0.0, carry = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double term = double(i + 1) * p[i] - carry;
        const double updated = sum + term;
        carry = (updated - sum) - term;
        sum = updated;
    }
    est.tau_est = sum;
    est.absorbed = s.absorbed();

    const double threshold = 1.0 - s.epsilon();
    est.stopping_time = s.t_max();
    est.converged = false;
    const auto& cumulative = s.cumulative();
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        if (cumulative[i] > threshold) {
            est.stopping_time = long(i + 1);
            est.converged = true;
            break;
        }
    }
    return est;
}

std::optional<long> one_shot_hitting_time(const MeasuredWalk& w,
                                          const WalkState& psi0, double p,
                                          long t_max) {
    if (p <= 0.0 || p > 1.0) {
        throw ConfigurationError("one_shot_hitting_time: p must lie in (0, 1]");
    }
    if (psi0.size() != w.evolution.dim()) {
        throw ConfigurationError("one_shot_hitting_time: state dimension mismatch");
    }
    const auto absorbing = w.absorbing_indices();
    Vector state = psi0.amplitudes();
    Vector next(state.size());
    for (long t = 1; t <= t_max; ++t) {
        next.noalias() = w.evolution.sparse() * state;
        state.swap(next);
        double arrival = 0.0;
        for (Index k : absorbing) {
            arrival += std::norm(state[k]);
        }
        if (arrival >= p) {
            return t;
        }
    }
    return std::nullopt;
}

std::optional<long> concurrent_hitting_time(const FirstCrossingSeries& s, double p) {
    if (p <= 0.0 || p >= 1.0) {
        throw ConfigurationError("concurrent_hitting_time: p must lie in (0, 1)");
    }
    const auto& cumulative = s.cumulative();
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        if (cumulative[i] > p) {
            return long(i + 1);
        }
    }
    return std::nullopt;
}

} // namespace qwalk
