#pragma once

#include <span>

#include "qwalk/types.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

// Row-major vectorization: the rows of a D x D matrix stacked top to bottom
// into one column vector, entry (r, c) at r * D + c.
struct VectorizedOperator {
    Index dim = 0;
    Vector data;
};

VectorizedOperator vectorize(const DenseMatrix& m);
DenseMatrix devectorize(const VectorizedOperator& v);

// Inner product with the vectorized identity = trace of the devectorized matrix.
Complex vectorized_trace(const VectorizedOperator& v);

// Default cap on the vectorized dimension D^2 of a superoperator build.
inline constexpr Index default_superop_budget = 100000;

// The two branches of one measured step, as D^2 x D^2 matrices acting on
// row-vectorized density operators: survival keeps the walk going
// (Q U rho U^dag Q), absorption ends it (P U rho U^dag P). Immutable.
class SuperoperatorPair {
public:
    SuperoperatorPair(SparseMatrix surviving_step, SparseMatrix absorbing_step);

    Index dim() const { return surviving_step_.rows(); }

    const SparseMatrix& survival_matrix() const { return survival_; }
    const SparseMatrix& absorption_matrix() const { return absorption_; }

    // The underlying D x D step factors Q U and P U.
    const SparseMatrix& surviving_step() const { return surviving_step_; }
    const SparseMatrix& absorbing_step() const { return absorbing_step_; }

private:
    SparseMatrix surviving_step_;
    SparseMatrix absorbing_step_;
    SparseMatrix survival_;
    SparseMatrix absorption_;
};

// Split a one-step unitary at the absorbing indices and assemble the pair.
// Refuses builds whose vectorized dimension exceeds the budget.
SuperoperatorPair build_superoperators(const SparseMatrix& step,
                                       std::span<const Index> absorbing,
                                       Index budget = default_superop_budget);

SuperoperatorPair build_superoperators(const MeasuredWalk& w,
                                       Index budget = default_superop_budget);

enum class Method { ClosedForm, Iterative, Reduced };

struct Tolerances {
    double solver_tol = 0.0;           // linear-solve residual target
    double absorption_threshold = 0.0; // flag infinite below 1 - this
    double epsilon = 0.0;              // series truncation, iterative runs
    long t_max = 0;                    // step cap, iterative runs
};

struct HittingResult {
    // When finite is false, tau holds the sum of t * p(t) restricted to the
    // absorbed branch; the full expectation diverges.
    double tau = 0.0;
    double absorption = 0.0;
    bool finite = true;
    Method method = Method::ClosedForm;
    Tolerances tolerances;
};

// Hitting time from two consecutive solves of (I - survival) against the
// vectorized initial density matrix. When the survival matrix has unit-
// modulus spectrum the system is solved on its support (the walk modes that
// decay), which is the pseudoinverse prescription; the absorbed mass then
// falls short of one and the result is flagged infinite.
HittingResult closed_form_hitting_time(const SuperoperatorPair& sp,
                                       const DenseMatrix& rho0,
                                       double tol = 1e-10,
                                       double absorption_threshold = 1e-6);

} // namespace qwalk
