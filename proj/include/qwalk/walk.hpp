#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/types.hpp"

namespace qwalk {

// Amplitudes over the position (x) coin basis, index = vertex * degree + label.
// An initial state is normalized; post-measurement branches are not.
class WalkState {
public:
    explicit WalkState(Vector amplitudes)
        : amplitudes_(std::move(amplitudes)),
          norm_squared_(amplitudes_.squaredNorm()) {}

    const Vector& amplitudes() const { return amplitudes_; }
    double norm_squared() const { return norm_squared_; }
    Index size() const { return amplitudes_.size(); }

private:
    Vector amplitudes_;
    double norm_squared_;
};

// Amplitude 1/sqrt(d) on every coin direction at v0, zero elsewhere.
WalkState symmetric_initial_state(const LabeledGraph& g, std::uint32_t v0);

// One step of the coined walk: coin flip on every vertex block, then the
// shift permutation along the labeled edges. The graph must validate; the
// coin dimension must equal the graph degree.
UnitaryMatrix evolution_operator(const LabeledGraph& g, const UnitaryMatrix& coin);

// Walk with a two-outcome arrival measurement at final_vertex after every
// step. Immutable; concurrent reads are safe.
struct MeasuredWalk {
    LabeledGraph graph;
    UnitaryMatrix coin;
    UnitaryMatrix evolution;
    std::uint32_t final_vertex;

    // Basis indices of the final vertex block, in increasing order.
    std::vector<Index> absorbing_indices() const;
};

MeasuredWalk make_measured_walk(LabeledGraph g, UnitaryMatrix coin,
                                std::uint32_t final_vertex);

// First-crossing probabilities p(1)..p(T) with running cumulative mass and
// the truncation record of the run that produced them.
class FirstCrossingSeries {
public:
    FirstCrossingSeries(std::vector<double> probabilities, long t_max,
                        double epsilon, bool converged);

    const std::vector<double>& probabilities() const { return probabilities_; }
    const std::vector<double>& cumulative() const { return cumulative_; }

    long length() const { return long(probabilities_.size()); }
    double absorbed() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

    // True when the run ended because cumulative mass exceeded 1 - epsilon,
    // false when it ran into t_max.
    bool converged() const { return converged_; }
    long t_max() const { return t_max_; }
    double epsilon() const { return epsilon_; }

private:
    std::vector<double> probabilities_;
    std::vector<double> cumulative_;
    long t_max_;
    double epsilon_;
    bool converged_;
};

// Core iteration over any one-step unitary with a set of absorbing basis
// indices: p(t) is the mass measured on the absorbing set after step t, and
// the surviving branch continues unnormalized.
FirstCrossingSeries first_crossing_series(const SparseMatrix& step,
                                          std::span<const Index> absorbing,
                                          const Vector& psi0, long t_max,
                                          double epsilon);

FirstCrossingSeries first_crossing_series(const MeasuredWalk& w,
                                          const WalkState& psi0,
                                          long t_max = 1000000,
                                          double epsilon = 1e-3);

struct HittingEstimate {
    double tau_est = 0.0;    // sum of t * p(t) over the recorded series
    long stopping_time = 0;  // first t with cumulative > 1 - epsilon; t_max when never
    bool converged = false;
    double absorbed = 0.0;
};

HittingEstimate hitting_time_estimate(const FirstCrossingSeries& s);

// Earliest T <= t_max at which the unmeasured walk has arrival probability
// >= p on the final vertex (any coin state); no measurement is inserted.
std::optional<long> one_shot_hitting_time(const MeasuredWalk& w,
                                          const WalkState& psi0, double p,
                                          long t_max);

// Earliest T with cumulative measured stopping probability > p.
std::optional<long> concurrent_hitting_time(const FirstCrossingSeries& s,
                                            double p);

} // namespace qwalk
