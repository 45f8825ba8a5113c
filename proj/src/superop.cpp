#include "qwalk/superop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/QR>
#include <unsupported/Eigen/KroneckerProduct>

#include "qwalk/errors.hpp"

namespace qwalk {

VectorizedOperator vectorize(const DenseMatrix& m) {
    if (m.rows() != m.cols()) {
        throw ConfigurationError("vectorize: matrix must be square, got " +
                                 std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()));
    }
    const Index d = m.rows();
    VectorizedOperator out;
    out.dim = d;
    out.data.resize(d * d);
    for (Index r = 0; r < d; ++r) {
        out.data.segment(r * d, d) = m.row(r).transpose();
    }
    return out;
}

DenseMatrix devectorize(const VectorizedOperator& v) {
    if (v.data.size() != v.dim * v.dim) {
        throw ConfigurationError("devectorize: data length does not match dim^2");
    }
    DenseMatrix m(v.dim, v.dim);
    for (Index r = 0; r < v.dim; ++r) {
        m.row(r) = v.data.segment(r * v.dim, v.dim).transpose();
    }
    return m;
}

Complex vectorized_trace(const VectorizedOperator& v) {
    Complex trace(0.0, 0.0);
    for (Index k = 0; k < v.dim; ++k) {
        trace += v.data[k * v.dim + k];
    }
    return trace;
}

namespace {

Complex trace_of_vector(const Vector& data, Index dim) {
    Complex trace(0.0, 0.0);
    for (Index k = 0; k < dim; ++k) {
        trace += data[k * dim + k];
    }
    return trace;
}

// BiCGSTAB on a user-supplied matvec. Returns the achieved relative residual;
// callers decide what counts as converged.
struct KrylovOutcome {
    bool converged = false;
    double residual = 0.0;
    long iterations = 0;
};

KrylovOutcome bicgstab(const std::function<Vector(const Vector&)>& apply,
                       const Vector& rhs, Vector& x, double tol, long max_iter) {
    KrylovOutcome outcome;
    const double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) {
        x.setZero(rhs.size());
        outcome.converged = true;
        return outcome;
    }
    x.setZero(rhs.size());
    Vector r = rhs;
    const Vector r0 = r;
    Complex rho(1.0, 0.0), alpha(1.0, 0.0), omega(1.0, 0.0);
    Vector v = Vector::Zero(rhs.size());
    Vector p = Vector::Zero(rhs.size());
    double best_residual = 1.0;
    Vector best_x = x;
    for (long i = 0; i < max_iter; ++i) {
        const Complex rho_next = r0.dot(r);
        if (std::abs(rho_next) < 1e-300) break; // breakdown
        if (i > 0) {
            const Complex beta = (rho_next / rho) * (alpha / omega);
            p = r + beta * (p - omega * v);
        } else {
            p = r;
        }
        rho = rho_next;
        v = apply(p);
        const Complex denom = r0.dot(v);
        if (std::abs(denom) < 1e-300) break;
        alpha = rho / denom;
        Vector s = r - alpha * v;
        if (s.norm() / rhs_norm < tol) {
            x += alpha * p;
            outcome.converged = true;
            outcome.residual = s.norm() / rhs_norm;
            outcome.iterations = i + 1;
            return outcome;
        }
        const Vector t = apply(s);
        const double t_norm2 = t.squaredNorm();
        if (t_norm2 < 1e-300) break;
        omega = t.dot(s) / t_norm2;
        x += alpha * p + omega * s;
        r = s - omega * t;
        const double rel = r.norm() / rhs_norm;
        outcome.iterations = i + 1;
        if (rel < best_residual) {
            best_residual = rel;
            best_x = x;
        }
        if (rel < tol) {
            outcome.converged = true;
            outcome.residual = rel;
            return outcome;
        }
    }
    x = best_x;
    outcome.residual = best_residual;
    return outcome;
}

// Orthonormal basis of the unit-modulus invariant subspace of the surviving
// step Q U. Eigenvectors at |lambda| = 1 are exactly the modes the
// measurement never drains, so (I - survival) is singular iff this is
// nonempty.
DenseMatrix peripheral_subspace(const SparseMatrix& surviving_step, double tol) {
    const DenseMatrix dense(surviving_step);
    Eigen::ComplexEigenSolver<DenseMatrix> solver(dense);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("closed_form_hitting_time: eigensolver failed on the surviving step");
    }
    std::vector<Index> keep;
    for (Index k = 0; k < dense.rows(); ++k) {
        if (std::abs(solver.eigenvalues()[k]) >= 1.0 - tol) {
            keep.push_back(k);
        }
    }
    if (keep.empty()) {
        return DenseMatrix(dense.rows(), 0);
    }
    DenseMatrix raw(dense.rows(), Index(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        raw.col(Index(i)) = solver.eigenvectors().col(keep[i]);
    }
    Eigen::ColPivHouseholderQR<DenseMatrix> qr(raw);
    qr.setThreshold(1e-10);
    const Index rank = qr.rank();
    DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(dense.rows(), rank);
    // Invariance check: the basis must close under the surviving step.
    const DenseMatrix image = dense * q;
    const DenseMatrix residual = image - q * (q.adjoint() * image);
    if (rank != Index(keep.size()) || residual.cwiseAbs().maxCoeff() > 1e-8) {
        throw NumericalError(
            "closed_form_hitting_time: unit-modulus subspace of the surviving step "
            "is numerically unreliable (residual " +
            std::to_string(residual.cwiseAbs().maxCoeff()) + ")");
    }
    return q;
}

} // namespace

SuperoperatorPair::SuperoperatorPair(SparseMatrix surviving_step,
                                     SparseMatrix absorbing_step)
    : surviving_step_(std::move(surviving_step)),
      absorbing_step_(std::move(absorbing_step)) {
    survival_ = Eigen::kroneckerProduct(surviving_step_,
                                        surviving_step_.conjugate()).eval();
    absorption_ = Eigen::kroneckerProduct(absorbing_step_,
                                          absorbing_step_.conjugate()).eval();
    survival_.makeCompressed();
    absorption_.makeCompressed();
}

SuperoperatorPair build_superoperators(const SparseMatrix& step,
                                       std::span<const Index> absorbing,
                                       Index budget) {
    const Index d = step.rows();
    if (step.cols() != d) {
        throw ConfigurationError("build_superoperators: step matrix must be square");
    }
    if (double(d) * double(d) > double(budget)) {
        throw ResourceError("build_superoperators: vectorized dimension " +
                            std::to_string(d) + "^2 = " + std::to_string(d * d) +
                            " exceeds the budget of " + std::to_string(budget) +
                            " rows; use the iterative or reduced paths instead");
    }
    std::vector<char> is_absorbing(std::size_t(d), 0);
    for (Index k : absorbing) {
        if (k < 0 || k >= d) {
            throw ConfigurationError("build_superoperators: absorbing index out of range");
        }
        is_absorbing[std::size_t(k)] = 1;
    }
    std::vector<Triplet> surviving, arriving;
    surviving.reserve(std::size_t(step.nonZeros()));
    for (int k = 0; k < step.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(step, k); it; ++it) {
            if (is_absorbing[std::size_t(it.row())]) {
                arriving.emplace_back(it.row(), it.col(), it.value());
            } else {
                surviving.emplace_back(it.row(), it.col(), it.value());
            }
        }
    }
    SparseMatrix q_step(d, d), p_step(d, d);
    q_step.setFromTriplets(surviving.begin(), surviving.end());
    p_step.setFromTriplets(arriving.begin(), arriving.end());
    return SuperoperatorPair(std::move(q_step), std::move(p_step));
}

SuperoperatorPair build_superoperators(const MeasuredWalk& w, Index budget) {
    const auto absorbing = w.absorbing_indices();
    return build_superoperators(w.evolution.sparse(), absorbing, budget);
}

HittingResult closed_form_hitting_time(const SuperoperatorPair& sp,
                                       const DenseMatrix& rho0, double tol,
                                       double absorption_threshold) {
    const Index d = sp.dim();
    if (rho0.rows() != d || rho0.cols() != d) {
        throw ConfigurationError("closed_form_hitting_time: density matrix is " +
                                 std::to_string(rho0.rows()) + "x" +
                                 std::to_string(rho0.cols()) + ", expected " +
                                 std::to_string(d) + "x" + std::to_string(d));
    }
    if (std::abs(rho0.trace() - Complex(1.0, 0.0)) > 1e-9) {
        throw ConfigurationError("closed_form_hitting_time: density matrix trace != 1");
    }
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
        throw ConfigurationError("closed_form_hitting_time: density matrix not hermitian");
    }

    VectorizedOperator rho_v = vectorize(rho0);

    // Restrict to the support: zero every block of rho that touches the
    // never-draining subspace. The absorption matrix annihilates those blocks
    // anyway, so the reported numbers only reflect the decaying modes.
    const DenseMatrix peripheral = peripheral_subspace(sp.surviving_step(), 1e-8);
    if (peripheral.cols() > 0) {
        DenseMatrix r = devectorize(rho_v);
        const DenseMatrix overlap = peripheral * (peripheral.adjoint() * r);
        r -= overlap;
        r -= (r * peripheral) * peripheral.adjoint();
        rho_v = vectorize(r);
    }

    const SparseMatrix& survival = sp.survival_matrix();
    const auto apply_shifted = [&survival](const Vector& v) -> Vector {
        return v - survival * v;
    };

    const long max_iter = std::max<long>(2000, 4 * d * d);
    Vector first, second;
    KrylovOutcome out1 = bicgstab(apply_shifted, rho_v.data, first, tol, max_iter);
    KrylovOutcome out2;
    if (out1.converged) {
        out2 = bicgstab(apply_shifted, first, second, tol, max_iter);
    }

    if (!out1.converged || !out2.converged) {
        // Dense fallback: minimum-norm least-squares handles the singular
        // case exactly; only affordable at small vectorized dimensions.
        if (d * d <= 4096) {
            DenseMatrix shifted = DenseMatrix::Identity(d * d, d * d) - DenseMatrix(survival);
            Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod(shifted);
            first = cod.solve(rho_v.data);
            second = cod.solve(first);
        } else {
            const double residual = out1.converged ? out2.residual : out1.residual;
            throw NumericalError(
                "closed_form_hitting_time: Krylov solve stagnated at relative residual " +
                std::to_string(residual) + " (target " + std::to_string(tol) + ")");
        }
    }

    const Vector absorbed_once = sp.absorption_matrix() * first;
    const Vector absorbed_twice = sp.absorption_matrix() * second;
    const Complex absorption_c = trace_of_vector(absorbed_once, d);
    const Complex tau_c = trace_of_vector(absorbed_twice, d);
    if (std::abs(absorption_c.imag()) > 1e-8 || std::abs(tau_c.imag()) > 1e-8) {
        throw NumericalError("closed_form_hitting_time: trace has imaginary residue " +
                             std::to_string(std::max(std::abs(absorption_c.imag()),
                                                     std::abs(tau_c.imag()))));
    }

    HittingResult result;
    result.method = Method::ClosedForm;
    result.tolerances.solver_tol = tol;
    result.tolerances.absorption_threshold = absorption_threshold;
    result.absorption = absorption_c.real();
    result.tau = std::max(tau_c.real(), 0.0);
    result.finite = result.absorption >= 1.0 - absorption_threshold;
    return result;
}

} // namespace qwalk
