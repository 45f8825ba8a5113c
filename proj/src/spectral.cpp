#include "qwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

// Index groups of adjacent values within tol.
std::vector<std::pair<Index, Index>> group_sorted(const Eigen::VectorXd& values,
                                                  double tol) {
    std::vector<std::pair<Index, Index>> groups;
    Index start = 0;
    for (Index k = 1; k <= values.size(); ++k) {
        if (k == values.size() || values[k] - values[k - 1] > tol) {
            groups.emplace_back(start, k);
            start = k;
        }
    }
    return groups;
}

} // namespace

EigenstructureReport eigendecompose(const UnitaryMatrix& u, double tol_cluster,
                                    Index dense_cap) {
    const Index dim = u.dim();
    if (dim > dense_cap) {
        throw ResourceError("eigendecompose: dimension " + std::to_string(dim) +
                            " exceeds the dense-diagonalization cap of " +
                            std::to_string(dense_cap));
    }
    if (u.unitarity_defect() > 1e-10) {
        throw ConfigurationError("eigendecompose: matrix is not unitary (defect " +
                                 std::to_string(u.unitarity_defect()) + ")");
    }
    const DenseMatrix dense = u.dense();

    // A unitary is normal, so its hermitian and antihermitian parts commute
    // and share eigenspaces. Diagonalize cos(theta) = (U + U^dag)/2 first,
    // then split each eigenspace by sin(theta) = (U - U^dag)/(2i) restricted
    // to it. Both solves are hermitian, which keeps degenerate clusters
    // orthonormal.
    const DenseMatrix cos_part = (dense + dense.adjoint()) / 2.0;
    const DenseMatrix sin_part = (dense - dense.adjoint()) / Complex(0.0, 2.0);

    Eigen::SelfAdjointEigenSolver<DenseMatrix> cos_solver(cos_part);
    if (cos_solver.info() != Eigen::Success) {
        throw NumericalError("eigendecompose: hermitian eigensolver failed");
    }

    EigenstructureReport report;
    report.dim = dim;
    report.tol_cluster = tol_cluster;

    const auto cos_groups = group_sorted(cos_solver.eigenvalues(), tol_cluster);
    for (const auto& [begin, end] : cos_groups) {
        const Index m = end - begin;
        const DenseMatrix block = cos_solver.eigenvectors().middleCols(begin, m);
        const double cos_value = cos_solver.eigenvalues().segment(begin, m).mean();

        Eigen::SelfAdjointEigenSolver<DenseMatrix> sin_solver(
            DenseMatrix(block.adjoint() * sin_part * block));
        if (sin_solver.info() != Eigen::Success) {
            throw NumericalError("eigendecompose: hermitian eigensolver failed");
        }
        const auto sin_groups = group_sorted(sin_solver.eigenvalues(), tol_cluster);
        for (const auto& [s_begin, s_end] : sin_groups) {
            const Index s_m = s_end - s_begin;
            EigenvalueCluster cluster;
            cluster.multiplicity = s_m;
            cluster.basis = block * sin_solver.eigenvectors().middleCols(s_begin, s_m);
            const double sin_value = sin_solver.eigenvalues().segment(s_begin, s_m).mean();
            // Snap the representative onto the unit circle.
            const double angle = std::atan2(sin_value, cos_value);
            cluster.eigenvalue = std::polar(1.0, angle);
            report.clusters.push_back(std::move(cluster));
        }
    }

    std::sort(report.clusters.begin(), report.clusters.end(),
              [](const EigenvalueCluster& a, const EigenvalueCluster& b) {
                  return std::arg(a.eigenvalue) < std::arg(b.eigenvalue);
              });

    // Clusters closer than 10x the tolerance make the degeneracy counts
    // ambiguous; flag instead of guessing.
    for (std::size_t a = 0; a < report.clusters.size(); ++a) {
        for (std::size_t b = a + 1; b < report.clusters.size(); ++b) {
            const double gap = std::abs(report.clusters[a].eigenvalue -
                                        report.clusters[b].eigenvalue);
            if (gap < 10.0 * tol_cluster) {
                report.ambiguous = true;
            }
        }
    }
    return report;
}

AvoidingProjector avoiding_projector(const EigenstructureReport& report,
                                     std::uint32_t final_vertex,
                                     std::uint32_t degree, double tol_rank) {
    const Index d = Index(degree);
    const Index row0 = Index(final_vertex) * d;
    if (row0 + d > report.dim) {
        throw ConfigurationError("avoiding_projector: final vertex block out of range");
    }

    AvoidingProjector projector;
    projector.matrix = DenseMatrix::Zero(report.dim, report.dim);

    for (const auto& cluster : report.clusters) {
        ClusterOverlap overlap;
        overlap.eigenvalue = cluster.eigenvalue;
        overlap.multiplicity = cluster.multiplicity;

        // Rows of the basis at the final vertex: a null direction of this
        // d x m block is an eigenvector with no amplitude there.
        const DenseMatrix block = cluster.basis.middleRows(row0, d);
        Eigen::JacobiSVD<DenseMatrix> svd(block, Eigen::ComputeFullV);
        const auto& sigma = svd.singularValues();
        overlap.sigma_max = sigma.size() > 0 ? sigma[0] : 0.0;
        overlap.sigma_min = sigma.size() > 0 ? sigma[sigma.size() - 1] : 0.0;
        if (cluster.multiplicity > d) {
            overlap.sigma_min = 0.0; // rank cannot exceed d
        }

        const double cutoff = tol_rank * std::max(overlap.sigma_max, 1e-300);
        Index kept = 0;
        Index kept_loose = 0;
        for (Index k = 0; k < sigma.size(); ++k) {
            if (sigma[k] > cutoff) ++kept;
            if (sigma[k] > 10.0 * cutoff) ++kept_loose;
        }
        overlap.avoiding_dim = cluster.multiplicity - kept;
        overlap.rank_stable = (kept == kept_loose);

        if (overlap.avoiding_dim > 0) {
            const DenseMatrix null_basis =
                cluster.basis * svd.matrixV().rightCols(overlap.avoiding_dim);
            projector.matrix.noalias() += null_basis * null_basis.adjoint();
            projector.rank += overlap.avoiding_dim;
        }
        projector.cluster_overlaps.push_back(overlap);
    }
    return projector;
}

double infinite_hitting_probability(const AvoidingProjector& p,
                                    const WalkState& psi0) {
    if (psi0.size() != p.matrix.rows()) {
        throw ConfigurationError("infinite_hitting_probability: state dimension mismatch");
    }
    if (std::abs(psi0.norm_squared() - 1.0) > 1e-9) {
        throw ConfigurationError("infinite_hitting_probability: state is not normalized");
    }
    const Complex value = psi0.amplitudes().dot(p.matrix * psi0.amplitudes());
    return std::clamp(value.real(), 0.0, 1.0);
}

} // namespace qwalk
