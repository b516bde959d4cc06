// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mlt/errors.hpp"

namespace mlt::matfun {

using Complex = std::complex<double>;

/// Dense square complex matrix, the carrier of all matrix transforms.
/// Construction validates squareness and that every entry is finite.
class ComplexMatrix {
public:
    explicit ComplexMatrix(Eigen::MatrixXcd entries);

    static ComplexMatrix identity(int order);
    static ComplexMatrix zero(int order);

    int order() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& eigen() const { return entries_; }
    Complex operator()(int i, int j) const { return entries_(i, j); }

private:
    Eigen::MatrixXcd entries_;
};

/// First row of an upper-triangular Toeplitz matrix: the dense expansion has
/// entry (i,j) = row[j-i] for j >= i and 0 below the diagonal.
struct UTToeplitzRow {
    std::vector<Complex> row;

    UTToeplitzRow() = default;
    explicit UTToeplitzRow(std::vector<Complex> r);

    int order() const { return static_cast<int>(row.size()); }
    ComplexMatrix dense() const;
};

/// A Jordan block: eigenvalue on the diagonal, ones on the superdiagonal.
struct JordanBlockSpec {
    Complex eigenvalue;
    int size = 1;

    JordanBlockSpec(Complex lambda, int m);
    ComplexMatrix dense() const;
};

/// Caller-supplied Jordan factorization S = P blkdiag(J_i) P^{-1}. No Jordan
/// decomposition is ever computed numerically; structured callers know P.
struct JordanFactoredMatrix {
    ComplexMatrix basis;
    std::vector<JordanBlockSpec> blocks;

    JordanFactoredMatrix(ComplexMatrix p, std::vector<JordanBlockSpec> b);
    int order() const { return basis.order(); }
};

/// Dense matrix exponential. Exact for 1x1 input; backward-stable
/// scaling-and-squaring elsewhere. Throws OverflowError if any entry of the
/// result is non-finite.
ComplexMatrix expm(const ComplexMatrix& m);

/// Matrix exponential of an upper-triangular Toeplitz matrix given by its
/// first row. The argument is diagonal-plus-nilpotent, so the result is
/// exp(row[0]) times a nilpotent series that terminates after order-1 terms.
UTToeplitzRow expm_ut_toeplitz(const UTToeplitzRow& a);

/// Dense expansion of the upper-triangular Toeplitz matrix with first row r.
ComplexMatrix toeplitz_from_row(const std::vector<Complex>& r);

/// First row of the matrix function f(J) for a Jordan block J of size m:
/// row[j] = f^{(j)}(lambda) / j!, taking the derivatives as input.
UTToeplitzRow jordan_block_function(const std::vector<Complex>& derivs,
                                    Complex lambda, int m);

/// Assembles P blkdiag(T(f_i)) P^{-1} from per-block Toeplitz first rows.
/// Throws SingularBasisError if the basis cannot be inverted reliably.
ComplexMatrix apply_jordan_factored(const std::vector<UTToeplitzRow>& f_per_block,
                                    const JordanFactoredMatrix& jf);

/// First row [1, -1, 0, ..., 0] of the negated Erlang(n, 1) sub-generator Q.
/// Callers scale by the rate.
UTToeplitzRow erlang_negated_subgenerator(int n);

/// First row of the product of two upper-triangular Toeplitz matrices of the
/// same order (truncated convolution of the first rows).
UTToeplitzRow toeplitz_multiply(const UTToeplitzRow& a, const UTToeplitzRow& b);

UTToeplitzRow operator-(const UTToeplitzRow& a);
UTToeplitzRow operator*(Complex s, const UTToeplitzRow& a);

} // namespace mlt::matfun
