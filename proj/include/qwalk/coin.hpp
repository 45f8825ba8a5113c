#pragma once

#include "qwalk/errors.hpp"
#include "qwalk/types.hpp"

namespace qwalk {

// Square complex matrix with a cached unitarity diagnostic. Stored sparse;
// coins are small enough that the overhead does not matter, and the evolution
// operator genuinely is sparse (degree nonzeros per column).
class UnitaryMatrix {
public:
    explicit UnitaryMatrix(SparseMatrix m);
    explicit UnitaryMatrix(const DenseMatrix& m);

    Index dim() const { return matrix_.rows(); }
    const SparseMatrix& sparse() const { return matrix_; }
    DenseMatrix dense() const { return DenseMatrix(matrix_); }

    // max-norm of U^dag U - I, computed once at construction.
    double unitarity_defect() const { return unitarity_defect_; }

private:
    SparseMatrix matrix_;
    double unitarity_defect_;
};

enum class CoinKind { Grover, Dft, Hadamard };

struct CoinSpec {
    CoinKind kind;
    int dimension;

    UnitaryMatrix build() const;
};

// Reflection about the uniform coin state: entries 2/d off the diagonal,
// 2/d - 1 on it. Defined for every d >= 1.
UnitaryMatrix grover_coin(int d);

// Fourier matrix: entry (r, c) = exp(2*pi*i*r*c/d) / sqrt(d). d >= 1.
UnitaryMatrix dft_coin(int d);

// Kronecker power of the 2x2 Hadamard; d must be a power of two, d >= 2.
UnitaryMatrix hadamard_coin(int d);

} // namespace qwalk
