// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "mlt/distributions.hpp"

#include <cmath>
#include <queue>

#include <unsupported/Eigen/MatrixFunctions>

namespace mlt::dist {

namespace {

constexpr double kPoleTol = 1e-300;

bool finite(double v) { return std::isfinite(v); }

void check_finite(const Complex& v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError(std::string(what) + " is not finite");
}

// log(1 + z) and exp(z) - 1 accurate near z = 0.
Complex clog1p(Complex z) {
    if (std::abs(z) > 0.25) return std::log(1.0 + z);
    Complex acc = 0.0, power = z;
    for (int k = 1; k <= 48; ++k) {
        const Complex term = power / static_cast<double>(k);
        acc += (k % 2 == 1) ? term : -term;
        if (std::abs(term) < 1e-20 * (std::abs(acc) + 1e-300)) break;
        power *= z;
    }
    return acc;
}

Complex cexpm1(Complex z) {
    if (std::abs(z) > 0.25) return std::exp(z) - 1.0;
    Complex acc = 0.0, term = 1.0;
    for (int k = 1; k <= 48; ++k) {
        term *= z / static_cast<double>(k);
        acc += term;
        if (std::abs(term) < 1e-20 * (std::abs(acc) + 1e-300)) break;
    }
    return acc;
}

} // namespace

PhaseType::PhaseType(Eigen::MatrixXd negated_subgenerator, Eigen::VectorXd sub_pmf)
    : neg_sub_(std::move(negated_subgenerator)), sub_pmf_(std::move(sub_pmf)) {
    const Eigen::Index n = neg_sub_.rows();
    if (n == 0 || neg_sub_.cols() != n)
        throw ArgumentError("phase-type sub-generator must be square and non-empty");
    if (sub_pmf_.size() != n)
        throw ArgumentError("phase-type sub-PMF size must match the sub-generator");

    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double p = sub_pmf_(i);
        if (!finite(p) || p < 0.0 || p > 1.0)
            throw ArgumentError("phase-type sub-PMF entries must lie in [0,1]");
        total += p;
    }
    if (total > 1.0 + 1e-12)
        throw ArgumentError("phase-type sub-PMF must sum to at most 1");
    defect_ = std::max(0.0, 1.0 - total);

    // -S is the sub-generator: nonnegative off-diagonals, row sums <= 0, and
    // every phase must reach absorption (otherwise S has a zero eigenvalue).
    std::vector<bool> exits(n, false);
    for (Eigen::Index i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double v = neg_sub_(i, j);
            if (!finite(v)) throw ArgumentError("phase-type sub-generator must be finite");
            if (i != j && -v < -1e-12)
                throw ArgumentError("phase-type off-diagonal rates must be nonnegative");
            row_sum += v;
        }
        if (neg_sub_(i, i) <= 0.0)
            throw ArgumentError("phase-type diagonal exit rates must be positive");
        if (row_sum < -1e-12)
            throw ArgumentError("phase-type sub-generator row sums must be nonnegative after negation");
        if (row_sum > 1e-12) exits[i] = true;
    }

    std::vector<bool> reaches(exits);
    bool changed = true;
    while (changed) {
        changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (reaches[i]) continue;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i != j && -neg_sub_(i, j) > 1e-12 && reaches[j]) {
                    reaches[i] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    for (Eigen::Index i = 0; i < n; ++i)
        if (!reaches[i])
            throw ArgumentError("phase-type chain has a phase that never absorbs");
}

PhaseType PhaseType::exponential(double rate) {
    if (!finite(rate) || rate <= 0.0) throw ArgumentError("exponential rate must be positive");
    Eigen::MatrixXd s(1, 1);
    s(0, 0) = rate;
    Eigen::VectorXd p(1);
    p(0) = 1.0;
    return PhaseType(std::move(s), std::move(p));
}

PhaseType PhaseType::erlang(int shape, double rate) {
    if (shape < 1) throw ArgumentError("Erlang shape must be >= 1");
    if (!finite(rate) || rate <= 0.0) throw ArgumentError("Erlang rate must be positive");
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(shape, shape);
    for (int i = 0; i < shape; ++i) {
        s(i, i) = rate;
        if (i + 1 < shape) s(i, i + 1) = -rate;
    }
    Eigen::VectorXd p = Eigen::VectorXd::Zero(shape);
    p(0) = 1.0;
    return PhaseType(std::move(s), std::move(p));
}

FadingModel FadingModel::deterministic(double value) {
    if (!finite(value) || value < 0.0) throw ArgumentError("deterministic value must be >= 0");
    return FadingModel(Deterministic{value});
}

FadingModel FadingModel::exponential(double rate) {
    if (!finite(rate) || rate <= 0.0) throw ArgumentError("exponential rate must be positive");
    return FadingModel(Exponential{rate});
}

FadingModel FadingModel::erlang(int shape, double rate) {
    if (shape < 1) throw ArgumentError("Erlang shape must be >= 1");
    if (!finite(rate) || rate <= 0.0) throw ArgumentError("Erlang rate must be positive");
    return FadingModel(Erlang{shape, rate});
}

FadingModel FadingModel::nakagami(int m, double mean_power) {
    if (m < 1) throw ArgumentError("Nakagami shape must be a positive integer");
    if (!finite(mean_power) || mean_power <= 0.0)
        throw ArgumentError("Nakagami mean power must be positive");
    return erlang(m, static_cast<double>(m) / mean_power);
}

FadingModel FadingModel::phase_type(PhaseType ph) { return FadingModel(Law(std::move(ph))); }

double FadingModel::mean() const { return moment(1); }

double FadingModel::moment(int order) const {
    if (order < 0) throw ArgumentError("moment order must be >= 0");
    if (order == 0) return 1.0;
    if (const auto* d = as_deterministic()) return std::pow(d->value, order);
    if (const auto* e = as_exponential()) {
        double acc = 1.0;
        for (int j = 1; j <= order; ++j) acc *= j / e->rate;
        return acc;
    }
    if (const auto* g = as_erlang()) {
        double acc = 1.0;
        for (int j = 0; j < order; ++j) acc *= (g->shape + j) / g->rate;
        return acc;
    }
    // E[X^j] = j! p^T S^{-j} 1 for the absorbed part; the zero atom adds 0.
    const PhaseType& ph = *as_phase_type();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(ph.negated_subgenerator());
    Eigen::VectorXd v = Eigen::VectorXd::Ones(ph.phases());
    double factorial = 1.0;
    for (int j = 1; j <= order; ++j) {
        v = lu.solve(v);
        factorial *= j;
    }
    return factorial * ph.sub_pmf().dot(v);
}

double FadingModel::atom_at_zero() const {
    if (const auto* d = as_deterministic()) return d->value == 0.0 ? 1.0 : 0.0;
    if (const auto* ph = as_phase_type()) return ph->defect();
    return 0.0;
}

double FadingModel::sample(std::mt19937_64& rng) const {
    if (const auto* d = as_deterministic()) return d->value;
    if (const auto* e = as_exponential())
        return std::exponential_distribution<double>(e->rate)(rng);
    if (const auto* g = as_erlang())
        return std::gamma_distribution<double>(g->shape, 1.0 / g->rate)(rng);
    return phase_type_sample(*as_phase_type(), rng);
}

Complex scalar_lt(const FadingModel& m, Complex s) {
    return scalar_lt_derivs(m, s, 1)[0];
}

Complex one_minus_lt(const FadingModel& m, Complex s) {
    if (const auto* d = m.as_deterministic()) return -cexpm1(-s * d->value);
    if (const auto* e = m.as_exponential()) {
        const Complex denom = e->rate + s;
        if (std::abs(denom) < kPoleTol)
            throw DomainError("Laplace transform pole at s = -rate");
        return s / denom;
    }
    if (const auto* g = m.as_erlang()) {
        const Complex denom = g->rate + s;
        if (std::abs(denom) < kPoleTol)
            throw DomainError("Laplace transform pole at s = -rate");
        return -cexpm1(-static_cast<double>(g->shape) * clog1p(s / g->rate));
    }
    // 1 - p^T (sI + S)^{-1} S 1 - defect collapses to s p^T (sI + S)^{-1} 1.
    const PhaseType& ph = *m.as_phase_type();
    const int n = ph.phases();
    Eigen::MatrixXcd a = ph.negated_subgenerator().cast<Complex>();
    for (int i = 0; i < n; ++i) a(i, i) += s;
    const Eigen::VectorXcd v =
        Eigen::PartialPivLU<Eigen::MatrixXcd>(a).solve(Eigen::VectorXcd::Ones(n));
    const Complex out = s * ph.sub_pmf().cast<Complex>().dot(v);
    check_finite(out, "phase-type resolvent");
    return out;
}

std::vector<Complex> scalar_lt_derivs(const FadingModel& m, Complex s, int count) {
    if (count < 1) throw ArgumentError("derivative count must be >= 1");
    UTToeplitzRow scaled = matrix_lt_bidiag(m, s, 1.0, count);
    std::vector<Complex> out(scaled.row);
    double factorial = 1.0;
    for (int t = 0; t < count; ++t) {
        if (t > 0) factorial *= t;
        out[t] *= factorial;
        check_finite(out[t], "Laplace transform derivative");
    }
    return out;
}

UTToeplitzRow matrix_lt_block(const FadingModel& m, const JordanBlockSpec& j) {
    if (j.eigenvalue.real() < 0.0)
        throw NonconvergentTransformError(
            "matrix Laplace transform requires Re(eigenvalue) >= 0");
    return matrix_lt_bidiag(m, j.eigenvalue, 1.0, j.size);
}

UTToeplitzRow matrix_lt_bidiag(const FadingModel& m, Complex s0, Complex s1, int order) {
    if (order < 1) throw ArgumentError("order must be >= 1");
    std::vector<Complex> row(order, 0.0);

    if (const auto* d = m.as_deterministic()) {
        // row[t] = e^{-s0 c} (-c s1)^t / t!
        row[0] = std::exp(-s0 * d->value);
        const Complex step = -d->value * s1;
        for (int t = 1; t < order; ++t) row[t] = row[t - 1] * step / static_cast<double>(t);
    } else if (const auto* e = m.as_exponential()) {
        const Complex denom = e->rate + s0;
        if (std::abs(denom) < kPoleTol)
            throw DomainError("Laplace transform pole at s = -rate");
        row[0] = e->rate / denom;
        const Complex step = -s1 / denom;
        for (int t = 1; t < order; ++t) row[t] = row[t - 1] * step;
    } else if (const auto* g = m.as_erlang()) {
        const Complex denom = g->rate + s0;
        if (std::abs(denom) < kPoleTol)
            throw DomainError("Laplace transform pole at s = -rate");
        row[0] = std::pow(g->rate / denom, g->shape);
        const Complex step = -s1 / denom;
        for (int t = 1; t < order; ++t)
            row[t] = row[t - 1] * step * (static_cast<double>(g->shape + t - 1) / t);
    } else {
        // row[t] = (-s1)^t p^T (s0 I + S)^{-(t+1)} S 1, plus the zero atom.
        const PhaseType& ph = *m.as_phase_type();
        const int n = ph.phases();
        Eigen::MatrixXcd a = ph.negated_subgenerator().cast<Complex>();
        for (int i = 0; i < n; ++i) a(i, i) += s0;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
        Eigen::VectorXcd exit_rates =
            (ph.negated_subgenerator() * Eigen::VectorXd::Ones(n)).cast<Complex>();
        Eigen::VectorXcd v = lu.solve(exit_rates);
        Eigen::VectorXcd p = ph.sub_pmf().cast<Complex>();
        row[0] = p.dot(v) + ph.defect();
        check_finite(row[0], "phase-type resolvent");
        Complex scale = 1.0;
        for (int t = 1; t < order; ++t) {
            v = lu.solve(v);
            scale *= -s1;
            row[t] = scale * p.dot(v);
        }
    }

    for (const Complex& v : row) check_finite(v, "matrix Laplace transform entry");
    return UTToeplitzRow(std::move(row));
}

ComplexMatrix matrix_lt_dense(const FadingModel& m, const ComplexMatrix& s) {
    const int n = s.order();
    if (n == 1) {
        Eigen::MatrixXcd out(1, 1);
        out(0, 0) = scalar_lt(m, s(0, 0));
        return ComplexMatrix(std::move(out));
    }

    if (const auto* d = m.as_deterministic())
        return matfun::expm(ComplexMatrix(Eigen::MatrixXcd(-d->value * s.eigen())));

    if (const auto* e = m.as_exponential()) {
        Eigen::MatrixXcd a = s.eigen();
        for (int i = 0; i < n; ++i) a(i, i) += e->rate;
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
        if (!lu.isInvertible())
            throw DomainError("singular resolvent in matrix Laplace transform");
        return ComplexMatrix(Eigen::MatrixXcd(
            e->rate * lu.solve(Eigen::MatrixXcd::Identity(n, n))));
    }

    if (const auto* g = m.as_erlang()) {
        Eigen::MatrixXcd a = s.eigen();
        for (int i = 0; i < n; ++i) a(i, i) += g->rate;
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
        if (!lu.isInvertible())
            throw DomainError("singular resolvent in matrix Laplace transform");
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(n, n);
        for (int k = 0; k < g->shape; ++k) acc = g->rate * lu.solve(acc);
        return ComplexMatrix(std::move(acc));
    }

    throw UnsupportedError(
        "general phase-type fading at a dense argument needs a Jordan factorization");
}

ComplexMatrix one_minus_matrix_lt_dense(const FadingModel& m, const ComplexMatrix& a) {
    const int n = a.order();
    if (n == 1) {
        Eigen::MatrixXcd out(1, 1);
        out(0, 0) = one_minus_lt(m, a(0, 0));
        return ComplexMatrix(std::move(out));
    }

    if (const auto* d = m.as_deterministic()) {
        const Eigen::MatrixXcd arg = -d->value * a.eigen();
        if (arg.cwiseAbs().rowwise().sum().maxCoeff() < 0.5) {
            // -expm1 of the matrix argument as a terminating-series sum
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
            Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
            for (int k = 1; k <= 64; ++k) {
                term = (term * arg) / static_cast<double>(k);
                acc += term;
                if (term.cwiseAbs().maxCoeff() < 1e-20 * (acc.cwiseAbs().maxCoeff() + 1e-300))
                    break;
            }
            return ComplexMatrix(Eigen::MatrixXcd(-acc));
        }
        return ComplexMatrix(Eigen::MatrixXcd(
            Eigen::MatrixXcd::Identity(n, n) -
            matfun::expm(ComplexMatrix(arg)).eigen()));
    }

    if (const auto* e = m.as_exponential()) {
        // I - rate (rate I + A)^{-1} = A (rate I + A)^{-1}
        Eigen::MatrixXcd shifted = a.eigen();
        for (int i = 0; i < n; ++i) shifted(i, i) += e->rate;
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(shifted.transpose());
        if (!lu.isInvertible())
            throw DomainError("singular resolvent in matrix Laplace transform");
        return ComplexMatrix(
            Eigen::MatrixXcd(lu.solve(a.eigen().transpose()).transpose()));
    }

    if (const auto* g = m.as_erlang()) {
        // I - B^k = (I - B) (I + B + ... + B^{k-1}) with B = rate (rate I + A)^{-1}
        Eigen::MatrixXcd shifted = a.eigen();
        for (int i = 0; i < n; ++i) shifted(i, i) += g->rate;
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(shifted);
        if (!lu.isInvertible())
            throw DomainError("singular resolvent in matrix Laplace transform");
        const Eigen::MatrixXcd b =
            g->rate * lu.solve(Eigen::MatrixXcd::Identity(n, n));
        const Eigen::MatrixXcd i_minus_b =
            shifted.transpose().fullPivLu().solve(a.eigen().transpose()).transpose();
        Eigen::MatrixXcd geom = Eigen::MatrixXcd::Identity(n, n);
        Eigen::MatrixXcd bk = Eigen::MatrixXcd::Identity(n, n);
        for (int j = 1; j < g->shape; ++j) {
            bk = bk * b;
            geom += bk;
        }
        return ComplexMatrix(Eigen::MatrixXcd(i_minus_b * geom));
    }

    throw UnsupportedError(
        "general phase-type fading at a dense argument needs a Jordan factorization");
}

ComplexMatrix matrix_lt_dense(const FadingModel& m, const JordanFactoredMatrix& s) {
    std::vector<UTToeplitzRow> rows;
    rows.reserve(s.blocks.size());
    for (const auto& blk : s.blocks) rows.push_back(matrix_lt_block(m, blk));
    return matfun::apply_jordan_factored(rows, s);
}

double phase_type_ccdf(const PhaseType& ph, double tau) {
    if (!finite(tau) || tau < 0.0) throw ArgumentError("tau must be >= 0");
    Eigen::MatrixXd e = (-tau * ph.negated_subgenerator()).exp();
    const double v = ph.sub_pmf().dot(e * Eigen::VectorXd::Ones(ph.phases()));
    return std::clamp(v, 0.0, 1.0);
}

double phase_type_sample(const PhaseType& ph, std::mt19937_64& rng) {
    const int n = ph.phases();
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Initial phase from the sub-PMF; the defect absorbs immediately.
    double u = unif(rng);
    int phase = -1;
    for (int i = 0; i < n; ++i) {
        u -= ph.sub_pmf()(i);
        if (u < 0.0) {
            phase = i;
            break;
        }
    }
    if (phase < 0) return 0.0;

    double time = 0.0;
    const Eigen::MatrixXd& s = ph.negated_subgenerator();
    while (true) {
        const double exit_rate = s(phase, phase);
        time += std::exponential_distribution<double>(exit_rate)(rng);
        double v = unif(rng) * exit_rate;
        int next = -1;
        for (int j = 0; j < n; ++j) {
            if (j == phase) continue;
            v -= -s(phase, j);
            if (v < 0.0) {
                next = j;
                break;
            }
        }
        if (next < 0) return time; // absorbed
        phase = next;
    }
}

} // namespace mlt::dist
