// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <optional>
#include <random>
#include <variant>

#include "mlt/matfun.hpp"

namespace mlt::dist {

using matfun::Complex;
using matfun::ComplexMatrix;
using matfun::JordanBlockSpec;
using matfun::JordanFactoredMatrix;
using matfun::UTToeplitzRow;

/// Phase-type distribution stored as the negation of its sub-generator, so
/// the stored matrix has eigenvalues with strictly positive real part.
/// A sub-PMF summing to less than one leaves a point mass at zero.
class PhaseType {
public:
    PhaseType(Eigen::MatrixXd negated_subgenerator, Eigen::VectorXd sub_pmf);

    static PhaseType exponential(double rate);
    static PhaseType erlang(int shape, double rate);

    int phases() const { return static_cast<int>(sub_pmf_.size()); }
    const Eigen::MatrixXd& negated_subgenerator() const { return neg_sub_; }
    const Eigen::VectorXd& sub_pmf() const { return sub_pmf_; }
    /// Probability mass at zero, 1 - sum(sub_pmf).
    double defect() const { return defect_; }

private:
    Eigen::MatrixXd neg_sub_;
    Eigen::VectorXd sub_pmf_;
    double defect_ = 0.0;
};

/// Tagged family of non-negative power laws with closed-form Laplace
/// transforms and derivatives of every order.
class FadingModel {
public:
    struct Deterministic { double value; };
    struct Exponential { double rate; };
    struct Erlang { int shape; double rate; };

    static FadingModel deterministic(double value);
    static FadingModel exponential(double rate);
    static FadingModel erlang(int shape, double rate);
    /// Nakagami-m power fading with integer shape: Erlang(m, m / mean_power).
    static FadingModel nakagami(int m, double mean_power);
    static FadingModel phase_type(PhaseType ph);

    bool is_deterministic() const { return std::holds_alternative<Deterministic>(law_); }
    bool is_exponential() const { return std::holds_alternative<Exponential>(law_); }
    bool is_erlang() const { return std::holds_alternative<Erlang>(law_); }
    bool is_phase_type() const { return std::holds_alternative<PhaseType>(law_); }

    const Deterministic* as_deterministic() const { return std::get_if<Deterministic>(&law_); }
    const Exponential* as_exponential() const { return std::get_if<Exponential>(&law_); }
    const Erlang* as_erlang() const { return std::get_if<Erlang>(&law_); }
    const PhaseType* as_phase_type() const { return std::get_if<PhaseType>(&law_); }

    double mean() const;
    /// Raw moment E[X^order]; all models here have moments of every order.
    double moment(int order) const;
    /// P(X = 0): the defect for phase-type laws, 1 for Deterministic(0).
    double atom_at_zero() const;

    /// Draws one sample. Only callers owning the generator may share it.
    double sample(std::mt19937_64& rng) const;

private:
    using Law = std::variant<Deterministic, Exponential, Erlang, PhaseType>;
    explicit FadingModel(Law law) : law_(std::move(law)) {}
    Law law_;
};

/// Scalar Laplace transform E[e^{-sX}] in closed form.
Complex scalar_lt(const FadingModel& m, Complex s);

/// 1 - E[e^{-sX}] without cancellation: exact to relative precision even for
/// |s| far below machine epsilon, where forming 1 - scalar_lt would lose all
/// digits.
Complex one_minus_lt(const FadingModel& m, Complex s);

/// I - L_X(a) at a dense argument, built from resolvent identities rather
/// than subtraction so entries stay accurate when a is close to zero.
ComplexMatrix one_minus_matrix_lt_dense(const FadingModel& m, const ComplexMatrix& a);

/// Derivatives [L(s), L'(s), ..., L^{(count-1)}(s)] in closed form.
std::vector<Complex> scalar_lt_derivs(const FadingModel& m, Complex s, int count);

/// First row of the matrix Laplace transform at a Jordan block:
/// row[t] = L^{(t)}(lambda) / t!.
UTToeplitzRow matrix_lt_block(const FadingModel& m, const JordanBlockSpec& j);

/// First row of the matrix Laplace transform at the upper-bidiagonal Toeplitz
/// matrix with diagonal s0 and superdiagonal s1: row[t] = L^{(t)}(s0) s1^t / t!.
/// Covers Jordan blocks (s1 = 1), scaled Jordan blocks and scaled Erlang
/// generators (s1 = -s0) without going through raw factorial-sized derivatives.
UTToeplitzRow matrix_lt_bidiag(const FadingModel& m, Complex s0, Complex s1, int order);

/// Matrix Laplace transform at a dense argument via closed-form resolvents.
/// General phase-type fading at a dense argument needs a caller-supplied
/// Jordan factorization; the overload below accepts one.
ComplexMatrix matrix_lt_dense(const FadingModel& m, const ComplexMatrix& s);
ComplexMatrix matrix_lt_dense(const FadingModel& m, const JordanFactoredMatrix& s);

/// CCDF of a phase-type law: p^T exp(-S tau) 1. Equals sum(p) at tau = 0.
double phase_type_ccdf(const PhaseType& ph, double tau);

/// One absorption time of the underlying CTMC, simulated phase by phase.
double phase_type_sample(const PhaseType& ph, std::mt19937_64& rng);

} // namespace mlt::dist
