// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "mlt/matfun.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace mlt::matfun {

namespace {

bool all_finite(const Eigen::MatrixXcd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                return false;
    return true;
}

} // namespace

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
        throw ArgumentError("ComplexMatrix must be square and non-empty");
    if (!all_finite(entries_))
        throw ArgumentError("ComplexMatrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(int order) {
    return ComplexMatrix(Eigen::MatrixXcd::Identity(order, order));
}

ComplexMatrix ComplexMatrix::zero(int order) {
    return ComplexMatrix(Eigen::MatrixXcd::Zero(order, order));
}

UTToeplitzRow::UTToeplitzRow(std::vector<Complex> r) : row(std::move(r)) {
    if (row.empty()) throw ArgumentError("UTToeplitzRow must be non-empty");
    for (const Complex& v : row)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ArgumentError("UTToeplitzRow entries must be finite");
}

ComplexMatrix UTToeplitzRow::dense() const { return toeplitz_from_row(row); }

JordanBlockSpec::JordanBlockSpec(Complex lambda, int m) : eigenvalue(lambda), size(m) {
    if (m < 1) throw ArgumentError("Jordan block size must be >= 1");
}

ComplexMatrix JordanBlockSpec::dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
    for (int i = 0; i < size; ++i) {
        m(i, i) = eigenvalue;
        if (i + 1 < size) m(i, i + 1) = 1.0;
    }
    return ComplexMatrix(std::move(m));
}

JordanFactoredMatrix::JordanFactoredMatrix(ComplexMatrix p, std::vector<JordanBlockSpec> b)
    : basis(std::move(p)), blocks(std::move(b)) {
    int total = 0;
    for (const auto& blk : blocks) total += blk.size;
    if (total != basis.order())
        throw ArgumentError("Jordan block sizes must sum to the basis order");
}

ComplexMatrix expm(const ComplexMatrix& m) {
    if (m.order() == 1) {
        const Complex e = std::exp(m(0, 0));
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
            throw OverflowError("matrix exponential overflowed");
        return ComplexMatrix(Eigen::MatrixXcd::Constant(1, 1, e));
    }
    Eigen::MatrixXcd e = m.eigen().exp();
    if (!all_finite(e)) throw OverflowError("matrix exponential overflowed");
    return ComplexMatrix(std::move(e));
}

UTToeplitzRow expm_ut_toeplitz(const UTToeplitzRow& a) {
    const int n = a.order();
    const Complex scale = std::exp(a.row[0]);

    // exp(d I + N) = e^d sum_k N^k / k!, with N the strictly-upper Toeplitz
    // part. N^k is again Toeplitz, so everything stays on first rows.
    std::vector<Complex> acc(n, 0.0), term(n, 0.0);
    acc[0] = 1.0;
    term[0] = 1.0;
    for (int k = 1; k < n; ++k) {
        std::vector<Complex> next(n, 0.0);
        for (int i = k - 1; i < n; ++i) { // term[j] == 0 for j < k-1
            if (term[i] == 0.0) continue;
            for (int j = 1; i + j < n; ++j) next[i + j] += term[i] * a.row[j];
        }
        for (int i = 0; i < n; ++i) {
            next[i] /= static_cast<double>(k);
            acc[i] += next[i];
        }
        term = std::move(next);
    }
    for (Complex& v : acc) {
        v *= scale;
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw OverflowError("Toeplitz matrix exponential overflowed");
    }
    return UTToeplitzRow(std::move(acc));
}

ComplexMatrix toeplitz_from_row(const std::vector<Complex>& r) {
    if (r.empty()) throw ArgumentError("toeplitz_from_row: empty row");
    const int n = static_cast<int>(r.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = r[j - i];
    return ComplexMatrix(std::move(m));
}

UTToeplitzRow jordan_block_function(const std::vector<Complex>& derivs,
                                    Complex /*lambda*/, int m) {
    if (static_cast<int>(derivs.size()) < m)
        throw ArgumentError("jordan_block_function: need m derivatives");
    std::vector<Complex> row(m);
    double factorial = 1.0;
    for (int j = 0; j < m; ++j) {
        if (j > 0) factorial *= j;
        row[j] = derivs[j] / factorial;
    }
    return UTToeplitzRow(std::move(row));
}

ComplexMatrix apply_jordan_factored(const std::vector<UTToeplitzRow>& f_per_block,
                                    const JordanFactoredMatrix& jf) {
    if (f_per_block.size() != jf.blocks.size())
        throw ArgumentError("apply_jordan_factored: block count mismatch");
    const int n = jf.order();
    Eigen::MatrixXcd blockdiag = Eigen::MatrixXcd::Zero(n, n);
    int offset = 0;
    for (std::size_t b = 0; b < jf.blocks.size(); ++b) {
        const int m = jf.blocks[b].size;
        if (f_per_block[b].order() != m)
            throw ArgumentError("apply_jordan_factored: block order mismatch");
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j)
                blockdiag(offset + i, offset + j) = f_per_block[b].row[j - i];
        offset += m;
    }

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(jf.basis.eigen());
    if (!lu.isInvertible() || lu.rcond() < 1e-14)
        throw SingularBasisError("Jordan basis is singular or too ill-conditioned");
    // P B P^{-1} as solve(P^T, (P B)^T)^T to avoid forming the inverse.
    Eigen::MatrixXcd pb = jf.basis.eigen() * blockdiag;
    Eigen::MatrixXcd result =
        jf.basis.eigen().transpose().fullPivLu().solve(pb.transpose()).transpose();
    return ComplexMatrix(std::move(result));
}

UTToeplitzRow erlang_negated_subgenerator(int n) {
    if (n < 1) throw ArgumentError("Erlang order must be >= 1");
    std::vector<Complex> row(n, 0.0);
    row[0] = 1.0;
    if (n > 1) row[1] = -1.0;
    return UTToeplitzRow(std::move(row));
}

UTToeplitzRow toeplitz_multiply(const UTToeplitzRow& a, const UTToeplitzRow& b) {
    if (a.order() != b.order())
        throw ArgumentError("toeplitz_multiply: order mismatch");
    const int n = a.order();
    std::vector<Complex> out(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j) out[i + j] += a.row[i] * b.row[j];
    return UTToeplitzRow(std::move(out));
}

UTToeplitzRow operator-(const UTToeplitzRow& a) {
    std::vector<Complex> out(a.row);
    for (Complex& v : out) v = -v;
    return UTToeplitzRow(std::move(out));
}

UTToeplitzRow operator*(Complex s, const UTToeplitzRow& a) {
    std::vector<Complex> out(a.row);
    for (Complex& v : out) v *= s;
    return UTToeplitzRow(std::move(out));
}

} // namespace mlt::matfun
