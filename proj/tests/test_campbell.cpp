// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mlt/campbell.hpp"
#include "mlt/oracle.hpp"

using namespace mlt::campbell;
using mlt::DivergentIntegralError;
using mlt::NonconvergentTransformError;
using mlt::UnsupportedError;
using mlt::dist::FadingModel;
using mlt::dist::scalar_lt;
using mlt::matfun::Complex;
using mlt::matfun::JordanBlockSpec;
using mlt::matfun::UTToeplitzRow;

namespace {

constexpr double kPiSqHalf = std::numbers::pi * std::numbers::pi / 2.0;

void check_close(Complex a, Complex b, double tol) {
    CAPTURE(a.real());
    CAPTURE(a.imag());
    CAPTURE(b.real());
    CAPTURE(b.imag());
    CHECK(std::abs(a - b) <= tol * std::max(1.0, std::abs(b)));
}

// Test-side oracle: classic recursive Simpson, independent of the library's
// Gauss-Kronrod machinery.
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1);
}

double simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0);
}

// Infinite-range radial oracle with doubling truncation.
double simpson_radial(const std::function<double(double)>& f, double lo, double tol) {
    double acc = 0.0;
    double a = lo, b = std::max(1.0, 2.0 * lo);
    for (int k = 0; k < 60; ++k) {
        const double piece = simpson(f, a, b, tol);
        acc += piece;
        if (std::abs(piece) < 1e-13 * (std::abs(acc) + 1.0) && k > 2) break;
        a = b;
        b *= 2.0;
    }
    return acc;
}


// Test-side stable deficit 1 - L(x) per model, via std::expm1 / std::log1p.
double oracle_deficit(const FadingModel& fading, double x) {
    if (x == 0.0) return 0.0;
    if (const auto* d = fading.as_deterministic()) return -std::expm1(-x * d->value);
    if (const auto* e = fading.as_exponential()) return x / (e->rate + x);
    const auto* g = fading.as_erlang();
    return -std::expm1(-g->shape * std::log1p(x / g->rate));
}

ShotNoiseScenario bounded_scenario() {
    return ShotNoiseScenario(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                             FadingModel::exponential(1.0));
}

detail::FieldSpec constant_gain_stub() {
    detail::FieldSpec field;
    field.intensity = 1.0;
    field.fading = FadingModel::exponential(1.0);
    field.field_gain = [](double) { return 1.0; };
    return field;
}

} // namespace

TEST_CASE("field transform at a point") {
    // unit gain at the sample point: l(0) = 1 for the bounded law
    const ShotNoiseScenario det(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                                FadingModel::deterministic(1.0));
    const UTToeplitzRow one = field_matrix_lt(det, JordanBlockSpec(1.0, 1), {0.0, 0.0});
    check_close(one.row[0], std::exp(-1.0), 1e-14);

    // a zero-weight term drops out
    const ShotNoiseScenario two(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                                FadingModel::deterministic(1.0),
                                {{1.0, {0.0, 0.0}}, {0.0, {1.0, 0.0}}});
    const UTToeplitzRow same = field_matrix_lt(two, JordanBlockSpec(1.0, 1), {0.0, 0.0});
    check_close(same.row[0], one.row[0], 0.0);

    // fading transform evaluated at weight * gain * eigenvalue
    const UTToeplitzRow expo =
        field_matrix_lt(bounded_scenario(), JordanBlockSpec(2.0, 1), {1.0, 0.0});
    check_close(expo.row[0], 1.0 / (1.0 + 0.5 * 2.0), 1e-14);

    // product over independent terms at matching nilpotent scalings
    const ShotNoiseScenario pair(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                                 FadingModel::exponential(1.0),
                                 {{1.0, {0.0, 0.0}}, {2.0, {1.0, 0.0}}});
    const JordanBlockSpec block(Complex(1.5, 0.0), 3);
    const UTToeplitzRow prod = field_matrix_lt(pair, block, {0.0, 0.0});
    const UTToeplitzRow a = mlt::dist::matrix_lt_bidiag(
        FadingModel::exponential(1.0), 1.0 * 1.5, 1.0, 3);
    const UTToeplitzRow b = mlt::dist::matrix_lt_bidiag(
        FadingModel::exponential(1.0), 2.0 * 0.5 * 1.5, 2.0 * 0.5, 3);
    const UTToeplitzRow expect = mlt::matfun::toeplitz_multiply(a, b);
    for (int j = 0; j < 3; ++j) check_close(prod.row[j], expect.row[j], 1e-13);
}

TEST_CASE("Campbell integral: degenerate and closed-form cases") {
    const ShotNoiseScenario zero(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                                 FadingModel::deterministic(0.0));
    const UTToeplitzRow z = campbell_matrix_integral(zero, JordanBlockSpec(1.0, 3));
    for (const Complex& v : z.row) CHECK(std::abs(v) < 1e-14);

    // scalar derivative at 0+: value / s -> 2 pi int l(r) r dr = pi^2 / 2
    const double s = 1e-6;
    const UTToeplitzRow small =
        campbell_matrix_integral(bounded_scenario(), JordanBlockSpec(s, 1));
    CHECK(std::abs(small.row[0].real() / s - kPiSqHalf) < 1e-4);

    // zero-eigenvalue block of size 2 carries the mean integral
    const UTToeplitzRow j0 =
        campbell_matrix_integral(bounded_scenario(), JordanBlockSpec(0.0, 2));
    CHECK(std::abs(j0.row[0]) < 1e-14);
    const double mean_integral = simpson_radial(
        [](double r) {
            return 2.0 * std::numbers::pi * r / (1.0 + std::pow(r, 4.0));
        },
        0.0, 1e-12);
    check_close(j0.row[1], mean_integral, 1e-8);
    check_close(j0.row[1], kPiSqHalf, 1e-8);
}

TEST_CASE("shot-noise transform closed forms and the divergence branch") {
    const ShotNoiseScenario zero(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                                 FadingModel::deterministic(0.0));
    const UTToeplitzRow ident = shot_noise_matrix_lt(zero, JordanBlockSpec(1.0, 3));
    check_close(ident.row[0], 1.0, 1e-14);
    check_close(ident.row[1], 0.0, 1e-14);
    check_close(ident.row[2], 0.0, 1e-14);

    // constant unit gain over the whole plane is infinite shot noise
    const detail::FieldSpec stub = constant_gain_stub();
    const QuadratureConfig q;
    const UTToeplitzRow zero_row = detail::shot_noise_mlt_bidiag(stub, 1.0, 1.0, 2, q);
    CHECK(zero_row.row[0] == Complex(0.0));
    CHECK(zero_row.row[1] == Complex(0.0));

    // with a purely imaginary eigenvalue the value is undefined
    CHECK_THROWS_AS(detail::shot_noise_mlt_bidiag(stub, Complex(0.0, 1.0), 1.0, 1, q),
                    UnsupportedError);
}

TEST_CASE("order-1 blocks reproduce the scalar Campbell formula") {
    std::mt19937 rng(90210);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (int rep = 0; rep < 20; ++rep) {
        const double intensity = 0.5 + 1.5 * unif(rng);
        const double k_scale = 0.5 + 1.5 * unif(rng);
        const double alpha = 2.5 + 2.5 * unif(rng);
        const bool bounded = rep % 2 == 0;
        PathLoss pl = bounded ? PathLoss::bounded_power_law(k_scale, alpha)
                              : PathLoss::power_law(k_scale, alpha, 0.0);

        FadingModel fading = FadingModel::exponential(0.5 + unif(rng));
        if (rep % 3 == 1) fading = FadingModel::erlang(1 + rep % 4, 0.5 + unif(rng));
        if (rep % 3 == 2) fading = FadingModel::deterministic(0.2 + unif(rng));

        const double s = 0.1 + 4.9 * unif(rng);
        const ShotNoiseScenario sc(intensity, pl, fading);

        const double via_matrix =
            shot_noise_matrix_lt(sc, JordanBlockSpec(s, 1)).row[0].real();

        auto integrand = [&](double r) {
            if (r == 0.0) return 0.0;
            const double c = pl.field_gain(r);
            return oracle_deficit(fading, s * c) * r;
        };
        const double scalar_integral =
            2.0 * std::numbers::pi * intensity * simpson_radial(integrand, 0.0, 1e-13);
        const double via_scalar = std::exp(-scalar_integral);

        CAPTURE(rep);
        CHECK(std::abs(via_matrix - via_scalar) <= 1e-9 * std::max(1.0, via_scalar));
    }
}

TEST_CASE("first rows match the Bell-polynomial derivative engine") {
    const ShotNoiseScenario sc = bounded_scenario();
    const double lambda = 0.8;
    QuadratureConfig tight;
    tight.abs_tol = 1e-13;
    tight.rel_tol = 1e-12;

    auto f = [&](Complex z) {
        return campbell_matrix_integral(sc, JordanBlockSpec(z, 1), tight).row[0];
    };

    for (int n = 2; n <= 6; ++n) {
        const UTToeplitzRow row = shot_noise_matrix_lt(sc, JordanBlockSpec(lambda, n), tight);
        const std::vector<Complex> f_derivs =
            mlt::oracle::cauchy_derivatives(f, lambda, 0.5, n);
        std::vector<double> g(n);
        for (int t = 0; t < n; ++t) g[t] = f_derivs[t].real();
        const std::vector<double> h = mlt::oracle::exp_composite_derivs(g, n - 1);

        double factorial = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j > 0) factorial *= j;
            const double expected = h[j] / factorial;
            CAPTURE(n);
            CAPTURE(j);
            CHECK(std::abs(row.row[j].real() - expected) <= 1e-6 * std::abs(expected));
        }
    }
}

TEST_CASE("entries integrate independently on shared panels") {
    // the assembled-row integral equals per-entry integrals over the same
    // panels, bit for bit
    const FadingModel fading = FadingModel::exponential(1.0);
    const PathLoss pl = PathLoss::bounded_power_law(1.0, 4.0);
    const int n = 4;
    auto row_integrand = [&](double u, Complex* out) {
        if (u < 1e-100) {
            std::fill(out, out + n, Complex(0.0));
            return;
        }
        const double r = (1.0 - u) / u;
        const double jac = r / (u * u);
        const UTToeplitzRow term =
            mlt::dist::matrix_lt_bidiag(fading, pl.gain(r) * 1.2, pl.gain(r), n);
        out[0] = (1.0 - term.row[0]) * jac;
        for (int j = 1; j < n; ++j) out[j] = -term.row[j] * jac;
    };
    const mlt::quad::IntegralResult assembled = mlt::quad::integrate_adaptive(
        row_integrand, n, 0.0, 1.0, mlt::quad::AdaptiveOptions{1e-11, 1e-9, 2000}, 0.0);

    for (int c = 0; c < n; ++c) {
        auto entry = [&, c](double u, Complex* out) {
            Complex all[8];
            row_integrand(u, all);
            out[0] = all[c];
        };
        const std::vector<Complex> replay =
            mlt::quad::integrate_panels(entry, 1, assembled.panels);
        CHECK(replay[0].real() == assembled.value[c].real());
        CHECK(replay[0].imag() == assembled.value[c].imag());
    }
}

TEST_CASE("the scalar Campbell integral grows with s") {
    const ShotNoiseScenario sc = bounded_scenario();
    double prev = 0.0;
    for (double s : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double v = campbell_matrix_integral(sc, JordanBlockSpec(s, 1)).row[0].real();
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("matrix transform of sampled shot noise matches Monte Carlo") {
    const ShotNoiseScenario sc(0.5, PathLoss::bounded_power_law(1.0, 4.0),
                               FadingModel::exponential(1.0));
    const JordanBlockSpec block(Complex(0.7, 0.0), 2);
    const UTToeplitzRow analytic = shot_noise_matrix_lt(sc, block);

    mlt::oracle::McConfig mc;
    mc.seed = 77;
    mc.trials = 40000;
    mc.truncation_radius = 30.0;
    const std::vector<double> samples = mlt::oracle::sample_shot_noise(sc, mc);

    // E[exp(-J I)] per first-row entry: e^{-lambda I} and -I e^{-lambda I}
    double m0 = 0.0, m1 = 0.0, sq0 = 0.0, sq1 = 0.0;
    for (double x : samples) {
        const double e = std::exp(-0.7 * x);
        m0 += e;
        m1 += -x * e;
        sq0 += e * e;
        sq1 += x * e * x * e;
    }
    const double n = static_cast<double>(samples.size());
    m0 /= n;
    m1 /= n;
    const double se0 = std::sqrt((sq0 / n - m0 * m0) / n);
    const double se1 = std::sqrt((sq1 / n - m1 * m1) / n);
    CHECK(std::abs(analytic.row[0].real() - m0) <= 5.0 * se0 + 1e-12);
    CHECK(std::abs(analytic.row[1].real() - m1) <= 5.0 * se1 + 1e-12);
}

TEST_CASE("multi-term scenarios agree with Monte Carlo") {
    const ShotNoiseScenario sc(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                               FadingModel::exponential(1.0),
                               {{1.0, {-0.5, 0.0}}, {0.6, {0.5, 0.3}}});
    const double s = 0.9;
    const double analytic = shot_noise_matrix_lt(sc, JordanBlockSpec(s, 1)).row[0].real();

    mlt::oracle::McConfig mc;
    mc.seed = 99;
    mc.trials = 30000;
    mc.truncation_radius = 25.0;
    const std::vector<double> samples = mlt::oracle::sample_shot_noise(sc, mc);
    double mean = 0.0, sq = 0.0;
    for (double x : samples) {
        const double e = std::exp(-s * x);
        mean += e;
        sq += e * e;
    }
    mean /= static_cast<double>(samples.size());
    const double se = std::sqrt((sq / samples.size() - mean * mean) / samples.size());
    CHECK(std::abs(analytic - mean) <= 5.0 * se + 1e-10);
}

TEST_CASE("a centered hole reduces the radial range") {
    const ShotNoiseScenario holed(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                                  FadingModel::exponential(1.0), {{1.0, {0.0, 0.0}}},
                                  Hole{{0.0, 0.0}, 2.0});
    const double s = 1.3;
    const double got = campbell_matrix_integral(holed, JordanBlockSpec(s, 1)).row[0].real();
    const double expect = 2.0 * std::numbers::pi *
                          simpson_radial(
                              [&](double r) {
                                  const double c = 1.0 / (1.0 + std::pow(r, 4.0));
                                  return s * c / (1.0 + s * c) * r;
                              },
                              2.0, 1e-13);
    CHECK(std::abs(got - expect) <= 1e-8 * expect);
}

TEST_CASE("an off-center hole is excised along each ray") {
    const Hole hole{{3.0, 0.0}, 1.0};
    const ShotNoiseScenario holed(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                                  FadingModel::exponential(1.0),
                                  {{1.0, {0.0, 0.0}}, {0.5, {0.1, 0.0}}}, hole);
    const double s = 1.0;
    const double got = campbell_matrix_integral(holed, JordanBlockSpec(s, 1)).row[0].real();

    // oracle: full-plane integral minus the hole disk, each by 2-D Simpson
    auto deficit = [&](double x, double y) {
        const double c1 = 1.0 / (1.0 + std::pow(std::hypot(x, y), 4.0));
        const double c2 = 0.5 / (1.0 + std::pow(std::hypot(x - 0.1, y), 4.0));
        const double d1 = s * c1 / (1.0 + s * c1);
        const double d2 = s * c2 / (1.0 + s * c2);
        return d1 + d2 - d1 * d2;
    };
    const ShotNoiseScenario unholed(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                                    FadingModel::exponential(1.0),
                                    {{1.0, {0.0, 0.0}}, {0.5, {0.1, 0.0}}});
    const double full = campbell_matrix_integral(unholed, JordanBlockSpec(s, 1)).row[0].real();
    auto hole_slice = [&](double x) {
        const double half = std::sqrt(std::max(0.0, 1.0 - (x - 3.0) * (x - 3.0)));
        if (half == 0.0) return 0.0;
        return simpson([&](double y) { return deficit(x, y); }, -half, half, 1e-11);
    };
    const double hole_mass = simpson(hole_slice, 2.0, 4.0, 1e-11);
    // accuracy limited by the fixed 64 angular panels at the hole tangents
    CHECK(std::abs(got - (full - hole_mass)) <= 1e-4 * std::max(1.0, full));
}

TEST_CASE("finiteness diagnostics") {
    const FinitenessReport ok_singular = finiteness_check(
        ShotNoiseScenario(1.0, PathLoss::power_law(1.0, 4.0, 0.0),
                          FadingModel::exponential(1.0)),
        {0.5, 1.0, 5.0});
    CHECK(ok_singular.finite);
    CHECK(ok_singular.per_s.size() == 3);
    for (const auto& d : ok_singular.per_s) {
        CHECK(d.converged);
        CHECK(d.truncation_radius > 1.0);
    }

    const FinitenessReport ok_bounded =
        finiteness_check(bounded_scenario(), {1.0});
    CHECK(ok_bounded.finite);

    const QuadratureConfig q;
    const detail::FieldSpec stub = constant_gain_stub();
    CHECK_FALSE(detail::scalar_tail_diagnostic(stub, 1.0, q).converged);
}

TEST_CASE("singular attenuation has no finite moments") {
    const ShotNoiseScenario singular(1.0, PathLoss::power_law(1.0, 4.0, 0.0),
                                     FadingModel::exponential(1.0));
    CHECK_THROWS_AS(campbell_matrix_integral(singular, JordanBlockSpec(0.0, 2)),
                    NonconvergentTransformError);

    // an exclusion radius restores every moment
    const ShotNoiseScenario excluded(1.0, PathLoss::power_law(1.0, 4.0, 0.5),
                                     FadingModel::exponential(1.0));
    const UTToeplitzRow row = campbell_matrix_integral(excluded, JordanBlockSpec(0.0, 3));
    CHECK(std::abs(row.row[0]) < 1e-14);
    CHECK(row.row[1].real() > 0.0);
}
