#pragma once

#include <cstdint>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/types.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

struct EigenvalueCluster {
    Complex eigenvalue;  // representative point on the unit circle
    Index multiplicity = 0;
    DenseMatrix basis;   // D x multiplicity, orthonormal
};

struct EigenstructureReport {
    std::vector<EigenvalueCluster> clusters; // sorted by eigenvalue angle
    Index dim = 0;
    double tol_cluster = 0.0;
    // Set when some inter-cluster gap is below 10x the clustering tolerance;
    // degeneracy counts are then not trustworthy.
    bool ambiguous = false;
};

// Dense eigendecomposition of a unitary, grouping eigenvalues that agree
// within tol_cluster on the unit circle. Uses the hermitian real/imaginary
// parts of U, so exactly degenerate clusters come out with orthonormal bases.
EigenstructureReport eigendecompose(const UnitaryMatrix& u,
                                    double tol_cluster = 1e-8,
                                    Index dense_cap = 4096);

struct ClusterOverlap {
    Complex eigenvalue;
    Index multiplicity = 0;
    Index avoiding_dim = 0;  // eigenvectors with no final-vertex amplitude
    double sigma_min = 0.0;  // smallest singular value of the overlap block
    double sigma_max = 0.0;
    bool rank_stable = true; // same null dimension at 10x the threshold
};

struct AvoidingProjector {
    DenseMatrix matrix; // D x D, hermitian idempotent, annihilated by P_f
    Index rank = 0;
    std::vector<ClusterOverlap> cluster_overlaps;
};

// Projector onto all eigenvectors of the evolution with zero amplitude at the
// final vertex in every coin state. Per cluster, the avoiding directions are
// the null space of the d x m final-vertex overlap block, found by SVD with
// relative threshold tol_rank.
AvoidingProjector avoiding_projector(const EigenstructureReport& report,
                                     std::uint32_t final_vertex,
                                     std::uint32_t degree,
                                     double tol_rank = 1e-10);

// <psi0| P |psi0>: the probability the measured walk never arrives.
double infinite_hitting_probability(const AvoidingProjector& p,
                                    const WalkState& psi0);

} // namespace qwalk
