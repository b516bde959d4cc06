// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mlt/quadrature.hpp"

using namespace mlt::quad;

TEST_CASE("gk15 integrates low-degree polynomials exactly") {
    auto f = [](double x, Complex* out) {
        out[0] = 1.0 + x * (2.0 + x * (3.0 + x * 4.0));
        out[1] = std::pow(x, 7.0);
    };
    Complex value[2];
    double err[2];
    gk15(f, 2, -1.0, 2.0, value, err);
    // antiderivative x + x^2 + x^3 + x^4 and x^8/8
    CHECK(value[0].real() == doctest::Approx(2.0 + 4.0 + 8.0 + 16.0 -
                                             (-1.0 + 1.0 - 1.0 + 1.0))
                                 .epsilon(1e-14));
    CHECK(value[1].real() == doctest::Approx((256.0 - 1.0) / 8.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration reaches tight tolerances") {
    auto f = [](double x, Complex* out) { out[0] = std::exp(-x) * std::cos(10.0 * x); };
    const IntegralResult res =
        integrate_adaptive(f, 1, 0.0, 20.0, AdaptiveOptions{1e-13, 1e-13, 2000});
    // int_0^inf e^{-x} cos(10 x) dx = 1 / 101, tail beyond 20 below 1e-9 of it
    const double exact = (1.0 - std::exp(-20.0) * (std::cos(200.0) -
                                                   10.0 * std::sin(200.0))) /
                         101.0;
    CHECK(res.value[0].real() == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("the radial map integrates a bounded power-law tail") {
    // int_0^inf r / (1 + r^4) dr = pi / 4 via u = 1/(1+r)
    auto f = [](double u, Complex* out) {
        if (u < 1e-100) {
            out[0] = 0.0;
            return;
        }
        const double r = (1.0 - u) / u;
        const double jac = r / (u * u);
        out[0] = std::isfinite(jac) ? jac / (1.0 + std::pow(r, 4.0)) : 0.0;
    };
    const IntegralResult res =
        integrate_adaptive(f, 1, 0.0, 1.0, AdaptiveOptions{1e-12, 1e-10, 2000}, 0.0);
    CHECK(res.value[0].real() == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-10));
}

TEST_CASE("a non-integrable edge raises the divergence error") {
    auto f = [](double u, Complex* out) { out[0] = 1.0 / u; };
    CHECK_THROWS_AS(
        integrate_adaptive(f, 1, 0.0, 1.0, AdaptiveOptions{1e-10, 1e-8, 200}, 0.0),
        mlt::DivergentIntegralError);
}

TEST_CASE("budget exhaustion away from the divergence edge is a plain failure") {
    auto f = [](double x, Complex* out) {
        out[0] = std::pow(std::abs(x - std::numbers::inv_pi), -0.9);
    };
    CHECK_THROWS_AS(integrate_adaptive(f, 1, 0.0, 1.0, AdaptiveOptions{1e-14, 1e-14, 40}),
                    mlt::QuadratureError);
}

TEST_CASE("panel replay reproduces per-component results bit for bit") {
    auto vec = [](double x, Complex* out) {
        out[0] = std::sin(3.0 * x);
        out[1] = Complex(std::cos(x), std::exp(-x));
        out[2] = x * x * std::log1p(x);
    };
    const IntegralResult assembled =
        integrate_adaptive(vec, 3, 0.0, 4.0, AdaptiveOptions{1e-11, 1e-10, 2000});
    REQUIRE(assembled.panels.size() > 1);

    for (int c = 0; c < 3; ++c) {
        auto single = [&, c](double x, Complex* out) {
            Complex all[3];
            vec(x, all);
            out[0] = all[c];
        };
        const std::vector<Complex> replay = integrate_panels(single, 1, assembled.panels);
        CHECK(replay[0].real() == assembled.value[c].real());
        CHECK(replay[0].imag() == assembled.value[c].imag());
    }
}

TEST_CASE("gauss_legendre nodes and weights") {
    std::vector<double> x, w;
    gauss_legendre(2, x, w);
    CHECK(x[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-14));

    gauss_legendre(64, x, w);
    double mass = 0.0, poly = 0.0;
    for (int i = 0; i < 64; ++i) {
        mass += w[i];
        poly += w[i] * std::pow(x[i], 10.0);
    }
    CHECK(mass == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(poly == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
}
