// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mlt/shotnoise_stats.hpp"

using namespace mlt::stats;
using mlt::ArgumentError;
using mlt::InfiniteMomentError;
using mlt::campbell::PathLoss;
using mlt::campbell::ShotNoiseScenario;
using mlt::dist::FadingModel;
using mlt::matfun::Complex;

namespace {

constexpr double kPiSqHalf = std::numbers::pi * std::numbers::pi / 2.0;

ShotNoiseScenario bounded_scenario() {
    return ShotNoiseScenario(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                             FadingModel::exponential(1.0));
}

// L_X(c Q^(N)) first row for X ~ Exp(1): row[t] = c^t / (1+c)^{t+1}
MatrixLtProvider exponential_provider() {
    return [](const ScaledErlangGenerator& g) {
        std::vector<Complex> row(g.order);
        const double c = g.rate;
        row[0] = 1.0 / (1.0 + c);
        for (int t = 1; t < g.order; ++t) row[t] = row[t - 1] * (c / (1.0 + c));
        return mlt::matfun::UTToeplitzRow(std::move(row));
    };
}

// L_X(c Q^(N)) first row for X = 1 a.s.: row[t] = e^{-c} c^t / t!
MatrixLtProvider unit_mass_provider() {
    return [](const ScaledErlangGenerator& g) {
        std::vector<Complex> row(g.order);
        row[0] = std::exp(-g.rate);
        for (int t = 1; t < g.order; ++t)
            row[t] = row[t - 1] * (g.rate / static_cast<double>(t));
        return mlt::matfun::UTToeplitzRow(std::move(row));
    };
}

} // namespace

TEST_CASE("delta_of_epsilon solves the Chernoff calibration") {
    const double d = delta_of_epsilon(100, 1e-4);
    CHECK(std::abs(d - 0.4927) <= 5e-4);
    // residual of the defining equation
    const double target = std::log(1e4) / 100.0;
    CHECK(std::abs(d - std::log1p(d) - target) < 1e-12);

    // delta -> 0 monotonically as epsilon -> 1
    double prev = 10.0;
    for (double eps : {1e-6, 1e-4, 1e-2, 0.1, 0.5, 0.9, 0.999}) {
        const double v = delta_of_epsilon(64, eps);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(delta_of_epsilon(64, 0.999999) < 2e-3);

    // N = 1 with target 1 - log 2 has the exact root delta = 1
    const double eps1 = std::exp(-(1.0 - std::log(2.0)));
    CHECK(std::abs(delta_of_epsilon(1, eps1) - 1.0) < 1e-10);

    CHECK_THROWS_AS(delta_of_epsilon(0, 0.5), ArgumentError);
    CHECK_THROWS_AS(delta_of_epsilon(10, 0.0), ArgumentError);
    CHECK_THROWS_AS(delta_of_epsilon(10, 1.0), ArgumentError);
}

TEST_CASE("erlang_chernoff_tail closed form") {
    CHECK(erlang_chernoff_tail(5, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(erlang_chernoff_tail(100, 0.4927) - 1e-4) < 2e-7);
    CHECK(erlang_chernoff_tail(1, 1.0) ==
          doctest::Approx(std::exp(-(1.0 - std::log(2.0)))).epsilon(1e-12));

    // inverse of delta_of_epsilon by construction
    for (int n : {1, 8, 64}) {
        for (double eps : {1e-5, 1e-3, 0.1}) {
            const double d = delta_of_epsilon(n, eps);
            CHECK(erlang_chernoff_tail(n, d) == doctest::Approx(eps).epsilon(1e-9));
        }
    }
}

TEST_CASE("Erlang smoothing of an exponential variable in closed form") {
    for (int n : {1, 4, 16, 64}) {
        for (double tau : {0.1, 1.0, 10.0}) {
            const double got = ccdf_approx_from_mlt(exponential_provider(), tau, n);
            const double expect = std::pow(1.0 + tau / n, -static_cast<double>(n));
            CAPTURE(n);
            CAPTURE(tau);
            CHECK(std::abs(got - expect) <= 1e-10);
        }
    }

    // tau -> 0+: P(X >= tau Z_N) -> 1
    CHECK(ccdf_approx_from_mlt(exponential_provider(), 1e-9, 8) ==
          doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Erlang smoothing of a unit mass is the Erlang CDF") {
    const int n = 10;
    const double got = ccdf_approx_from_mlt(unit_mass_provider(), 1.0, n);
    // P(Z_N <= 1) for Z_N ~ Erlang(10, 10) via the Poisson series
    double series = 0.0, term = 1.0;
    for (int i = 0; i < n; ++i) {
        if (i > 0) term *= 10.0 / i;
        series += term;
    }
    const double expect = 1.0 - std::exp(-10.0) * series;
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(got - 0.5421) < 5e-4);

    // provider must honor the requested order
    auto bad = [](const ScaledErlangGenerator&) {
        return mlt::matfun::UTToeplitzRow(std::vector<Complex>{1.0});
    };
    CHECK_THROWS_AS(ccdf_approx_from_mlt(bad, 1.0, 4), ArgumentError);
}

TEST_CASE("shot-noise moments against Campbell averaging") {
    const std::vector<double> m = moments(bounded_scenario(), 2);
    REQUIRE(m.size() == 3);
    CHECK(m[0] == 1.0);
    CHECK(std::abs(m[1] - kPiSqHalf) <= 1e-6 * kPiSqHalf);
    const double second = kPiSqHalf * kPiSqHalf + kPiSqHalf;
    CHECK(std::abs(m[2] - second) <= 1e-6 * second);

    CHECK(moments(bounded_scenario(), 0) == std::vector<double>{1.0});
}

TEST_CASE("singular attenuation reports the first divergent order") {
    const ShotNoiseScenario singular(1.0, PathLoss::power_law(1.0, 4.0, 0.0),
                                     FadingModel::exponential(1.0));
    try {
        moments(singular, 3);
        FAIL("expected InfiniteMomentError");
    } catch (const InfiniteMomentError& e) {
        CHECK(e.order == 1);
    }
}

TEST_CASE("moments match central differences of the scalar transform") {
    const ShotNoiseScenario sc = bounded_scenario();
    const std::vector<double> m = moments(sc, 3);

    // scalar transform L(s) = exp(-2 pi int (1 - L_H(s l(r))) r dr), evaluated
    // accurately enough to survive third differences at step 1e-4
    auto transform = [&](double s) {
        auto integrand = [&](double u, Complex* out) {
            if (u < 1e-100) {
                out[0] = 0.0;
                return;
            }
            const double r = (1.0 - u) / u;
            const double jac = r / (u * u);
            if (!std::isfinite(jac)) {
                out[0] = 0.0;
                return;
            }
            const double x = s / (1.0 + std::pow(r, 4.0));
            out[0] = x / (1.0 + x) * jac; // 1 - L for Exp(1) marks
        };
        const double integral =
            mlt::quad::integrate_adaptive(integrand, 1, 0.0, 1.0,
                                          mlt::quad::AdaptiveOptions{1e-16, 5e-15, 4000},
                                          0.0)
                .value[0]
                .real();
        return std::exp(-2.0 * std::numbers::pi * integral);
    };

    const double h = 1e-4;
    const double l_p2 = transform(2.0 * h), l_p1 = transform(h);
    const double l_0 = transform(0.0);
    const double l_m1 = transform(-h), l_m2 = transform(-2.0 * h);

    const double d1 = (l_p1 - l_m1) / (2.0 * h);
    const double d2 = (l_p1 - 2.0 * l_0 + l_m1) / (h * h);
    const double d3 = (l_p2 - 2.0 * l_p1 + 2.0 * l_m1 - l_m2) / (2.0 * h * h * h);

    CHECK(std::abs(-d1 - m[1]) <= 1e-4 * m[1]);
    CHECK(std::abs(d2 - m[2]) <= 1e-4 * m[2]);
    CHECK(std::abs(-d3 - m[3]) <= 1e-4 * m[3]);
}

TEST_CASE("smoothed CCDF behaves like a distribution tail") {
    const ShotNoiseScenario sc = bounded_scenario();

    // tau -> 0+ pushes the approximation to 1
    CHECK(shot_noise_ccdf(sc, 1e-6, 16, 1e-3).value > 0.999);

    double prev = 1.1;
    for (double tau : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        const CcdfApproxResult r = shot_noise_ccdf(sc, tau, 32, 1e-3);
        CHECK(r.value >= -1e-12);
        CHECK(r.value <= 1.0 + 1e-12);
        CHECK(r.value <= prev + 1e-12);
        CHECK(r.lower_bound <= r.value + 1e-9);
        CHECK(r.upper_bound >= r.value - 1e-9);
        prev = r.value;
    }
}

TEST_CASE("the smoothing ladder tightens as N grows") {
    const ShotNoiseScenario sc = bounded_scenario();
    const double tau = 2.0;
    std::vector<double> values;
    for (int n : {8, 16, 32, 64, 128})
        values.push_back(shot_noise_ccdf(sc, tau, n, 1e-3).value);
    for (std::size_t i = 0; i + 2 < values.size(); ++i) {
        const double gap_lo = std::abs(values[i + 1] - values[i]);
        const double gap_hi = std::abs(values[i + 2] - values[i + 1]);
        CHECK(gap_hi <= gap_lo + 1e-12);
    }
}

TEST_CASE("the certified band brackets a finer approximation") {
    const ShotNoiseScenario sc = bounded_scenario();
    const int n = 16;
    const double eps = 1e-3;
    for (double tau : {1.0, 2.0, 5.0}) {
        const CcdfApproxResult r = shot_noise_ccdf(sc, tau, n, eps);
        const double refined = shot_noise_ccdf(sc, tau, 4 * n, eps).value;
        CAPTURE(tau);
        CHECK(r.lower_bound <= refined + 1e-10);
        CHECK(r.upper_bound >= refined - 1e-10);
    }
}

TEST_CASE("the smoothing argument is a valid negated sub-generator") {
    const ShotNoiseScenario sc = bounded_scenario();
    const int n = 24;
    const double tau = 1.5;
    const mlt::matfun::UTToeplitzRow s_row =
        mlt::campbell::campbell_integral_scaled_erlang(sc, n / tau, n);

    CHECK(s_row.row[0].real() >= 0.0);
    for (int t = 1; t < n; ++t) CHECK(s_row.row[t].real() <= 1e-12);
    // all row sums of the Toeplitz expansion stay nonnegative
    double partial = 0.0;
    for (int t = 0; t < n; ++t) {
        partial += s_row.row[t].real();
        CHECK(partial >= -1e-10);
    }
}

TEST_CASE("a one-phase ladder still yields valid trivial bounds") {
    const ShotNoiseScenario sc = bounded_scenario();
    const CcdfApproxResult r = shot_noise_ccdf(sc, 1.0, 1, 1e-3);
    // delta(1e-3) at N = 1 exceeds 1, so only the trivial lower bound remains
    CHECK(r.delta > 1.0);
    CHECK(r.lower_bound == 0.0);
    CHECK(r.upper_bound >= r.value);
}
