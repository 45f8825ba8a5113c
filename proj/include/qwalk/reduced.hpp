#pragma once

#include "qwalk/coin.hpp"
#include "qwalk/superop.hpp"
#include "qwalk/types.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

// Basis of the 2n-dimensional subspace the Grover walk preserves when started
// in the symmetric state at vertex 0: one amplitude per (Hamming weight,
// direction sense). "Up" states point at a 0-bit (shift raises the weight),
// "down" states point at a 1-bit. There is no down state at weight 0 and no
// up state at weight n.
class ReducedBasis {
public:
    explicit ReducedBasis(int n);

    int n() const { return n_; }
    Index size() const { return 2 * Index(n_); }

    // |up, x> for 0 <= x <= n-1.
    Index up_index(int weight) const;
    // |down, x> for 1 <= x <= n.
    Index down_index(int weight) const;

private:
    int n_;
};

struct ReducedOperators {
    UnitaryMatrix shift; // swaps |up, x> and |down, x+1>
    UnitaryMatrix coin;  // weight-dependent rotation, angle cos = 1 - 2x/n
};

ReducedOperators reduced_operators(int n);

// One step of the reduced walk: shift * coin.
UnitaryMatrix reduced_evolution(int n);

// Hitting time of the Grover walk from the symmetric state at vertex 0 to the
// all-ones vertex, computed entirely in the reduced space. The absorbing
// state is |down, n>. method selects the closed-form superoperator solve or
// the iterative series estimate.
HittingResult reduced_hitting_time(int n, Method method, double epsilon = 1e-3,
                                   long t_max = 1000000,
                                   Index budget = default_superop_budget);

// Isometry into the full position (x) coin space: |up, x> spreads uniformly
// over all weight-x vertices and their 0-bit directions, |down, x> over their
// 1-bit directions.
WalkState embed_reduced_state(int n, const Vector& v);

} // namespace qwalk
