#include "qwalk/coin.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace qwalk {

namespace {

double max_abs(const SparseMatrix& m) {
    double worst = 0.0;
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

double unitarity_defect_of(const SparseMatrix& m) {
    SparseMatrix gram = (m.adjoint() * m).pruned();
    SparseMatrix identity(m.cols(), m.cols());
    identity.setIdentity();
    return max_abs(SparseMatrix(gram - identity));
}

} // namespace

UnitaryMatrix::UnitaryMatrix(SparseMatrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw ConfigurationError("UnitaryMatrix: matrix must be square, got " +
                                 std::to_string(matrix_.rows()) + "x" +
                                 std::to_string(matrix_.cols()));
    }
    matrix_.makeCompressed();
    unitarity_defect_ = unitarity_defect_of(matrix_);
}

UnitaryMatrix::UnitaryMatrix(const DenseMatrix& m)
    : UnitaryMatrix(SparseMatrix(m.sparseView())) {}

UnitaryMatrix CoinSpec::build() const {
    switch (kind) {
    case CoinKind::Grover: return grover_coin(dimension);
    case CoinKind::Dft: return dft_coin(dimension);
    case CoinKind::Hadamard: return hadamard_coin(dimension);
    }
    throw ConfigurationError("CoinSpec: unknown coin kind");
}

UnitaryMatrix grover_coin(int d) {
    if (d < 1) {
        throw ConfigurationError("grover_coin: dimension must be positive");
    }
    DenseMatrix m = DenseMatrix::Constant(d, d, Complex(2.0 / d, 0.0));
    m.diagonal().array() -= Complex(1.0, 0.0);
    return UnitaryMatrix(m);
}

UnitaryMatrix dft_coin(int d) {
    if (d < 1) {
        throw ConfigurationError("dft_coin: dimension must be positive");
    }
    const double scale = 1.0 / std::sqrt(double(d));
    DenseMatrix m(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            // Reduce the exponent mod d before evaluating the phase.
            const long exponent = (long(r) * c) % d;
            m(r, c) = scale * std::polar(1.0, 2.0 * std::numbers::pi * double(exponent) / d);
        }
    }
    return UnitaryMatrix(m);
}

UnitaryMatrix hadamard_coin(int d) {
    if (d < 2 || (d & (d - 1)) != 0) {
        throw ConfigurationError("hadamard_coin: dimension " + std::to_string(d) +
                                 " is not a power of two >= 2");
    }
    DenseMatrix base(2, 2);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    base << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
    DenseMatrix m = base;
    while (m.rows() < d) {
        DenseMatrix next(m.rows() * 2, m.cols() * 2);
        next.topLeftCorner(m.rows(), m.cols()) = inv_sqrt2 * m;
        next.topRightCorner(m.rows(), m.cols()) = inv_sqrt2 * m;
        next.bottomLeftCorner(m.rows(), m.cols()) = inv_sqrt2 * m;
        next.bottomRightCorner(m.rows(), m.cols()) = -inv_sqrt2 * m;
        m = std::move(next);
    }
    return UnitaryMatrix(m);
}

} // namespace qwalk
