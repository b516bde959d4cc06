// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mlt/oracle.hpp"
#include "mlt/quadrature.hpp"
#include "mlt/sinr.hpp"

using namespace mlt::sinr;
using mlt::ArgumentError;
using mlt::campbell::PathLoss;
using mlt::dist::FadingModel;
using mlt::matfun::Complex;

namespace {

NetworkScenario rayleigh_network(double noise = 0.0) {
    return NetworkScenario(1.0, PathLoss::power_law(1.0, 4.0), FadingModel::exponential(1.0),
                           FadingModel::exponential(1.0), noise);
}

} // namespace

TEST_CASE("nearest-distance density normalization, mode and CDF") {
    const double lambda = 1.7;
    auto density = [&](double r, Complex* out) {
        out[0] = nearest_bs_distance_density(lambda, r);
    };
    const double mass =
        mlt::quad::integrate_adaptive(density, 1, 0.0, 20.0,
                                      mlt::quad::AdaptiveOptions{1e-13, 1e-12, 2000})
            .value[0]
            .real();
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));

    const double mode = 1.0 / std::sqrt(2.0 * std::numbers::pi * lambda);
    const double at_mode = nearest_bs_distance_density(lambda, mode);
    CHECK(at_mode > nearest_bs_distance_density(lambda, mode * 0.98));
    CHECK(at_mode > nearest_bs_distance_density(lambda, mode * 1.02));

    auto unit_density = [&](double r, Complex* out) {
        out[0] = nearest_bs_distance_density(1.0, r);
    };
    const double below_one =
        mlt::quad::integrate_adaptive(unit_density, 1, 0.0, 1.0,
                                      mlt::quad::AdaptiveOptions{1e-13, 1e-12, 2000})
            .value[0]
            .real();
    CHECK(below_one == doctest::Approx(1.0 - std::exp(-std::numbers::pi)).epsilon(1e-10));
}

TEST_CASE("canonical Rayleigh coverage") {
    const double got = coverage_probability(rayleigh_network(), 1.0);
    const double expect = 1.0 / (1.0 + std::numbers::pi / 4.0);
    CHECK(std::abs(got - expect) < 1e-6);
}

TEST_CASE("the one-phase pipeline equals the scalar Campbell route") {
    const NetworkScenario net = rayleigh_network();
    const double tau = 1.3;
    const double got = coverage_probability(net, tau);

    // scalar route with the same outer rule
    const OuterQuadrature outer;
    const double r_cap = std::sqrt(std::log(1.0 / outer.tail_mass) / std::numbers::pi);
    std::vector<double> x, w;
    mlt::quad::gauss_legendre(outer.nodes, x, w);
    double acc = 0.0;
    for (int i = 0; i < outer.nodes; ++i) {
        const double r0 = 0.5 * r_cap * (x[i] + 1.0);
        // integrate (1 - L) r dr over [r0, inf) by shifting the u-map
        auto shifted = [&](double u, Complex* out) {
            if (u < 1e-100) {
                out[0] = 0.0;
                return;
            }
            const double t = (1.0 - u) / u;
            const double r = r0 + t;
            const double jac = r / (u * u);
            if (!std::isfinite(jac)) {
                out[0] = 0.0;
                return;
            }
            const double c = tau * std::pow(r / r0, -4.0);
            out[0] = c / (1.0 + c) * jac;
        };
        (void)integrand;
        const double inner =
            mlt::quad::integrate_adaptive(shifted, 1, 0.0, 1.0,
                                          mlt::quad::AdaptiveOptions{1e-13, 1e-11, 4000},
                                          0.0)
                .value[0]
                .real();
        const double p_cond = std::exp(-2.0 * std::numbers::pi * inner);
        acc += w[i] * 0.5 * r_cap * nearest_bs_distance_density(1.0, r0) * p_cond;
    }
    CHECK(std::abs(got - acc) < 1e-8);
}

TEST_CASE("coverage limits and monotonicity") {
    const NetworkScenario net = rayleigh_network();
    CHECK(coverage_probability(net, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));

    const CoverageCurve curve = coverage_curve(net, {0.25, 0.5, 1.0, 2.0, 4.0});
    for (std::size_t i = 0; i < curve.probabilities.size(); ++i) {
        CHECK(curve.probabilities[i] >= 0.0);
        CHECK(curve.probabilities[i] <= 1.0);
        if (i > 0) CHECK(curve.probabilities[i] <= curve.probabilities[i - 1] + 1e-12);
    }

    // nonincreasing in the noise power
    double prev = 1.1;
    for (double noise : {0.0, 0.5, 2.0, 8.0}) {
        const double v = coverage_probability(rayleigh_network(noise), 1.0);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("phase-type signal coverage agrees with Monte Carlo") {
    const NetworkScenario net(1.0, PathLoss::bounded_power_law(1.0, 4.0),
                              FadingModel::exponential(1.0), FadingModel::erlang(2, 2.0),
                              0.1);
    const double analytic = coverage_probability(net, 1.0);

    mlt::oracle::McConfig mc;
    mc.seed = 31;
    mc.trials = 100000;
    mc.truncation_radius = 20.0;
    const auto [coverage, meta] = mlt::oracle::estimate_coverage_and_meta(net, 1.0, {}, mc);
    CHECK(std::abs(analytic - coverage.mean) <= 3.5 * coverage.std_error + 1e-4);
}

TEST_CASE("meta-distribution limits and monotonicity") {
    const NetworkScenario net = rayleigh_network();
    const int n = 32;

    CHECK(meta_distribution(net, 1.0, 1e-9, n) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(meta_distribution(net, 1.0, 0.9999, n) < 0.05);

    const std::vector<double> zetas = {0.1, 0.25, 0.5, 0.75, 0.9};
    const std::vector<double> values = meta_distribution_grid(net, 1.0, zetas, n);
    for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(values[i] >= 0.0);
        CHECK(values[i] <= 1.0);
        if (i > 0) CHECK(values[i] <= values[i - 1] + 1e-10);
    }
}

TEST_CASE("meta-distribution integrates back to coverage") {
    const NetworkScenario net = rayleigh_network();
    const double tau = 1.0;
    const int n = 64;
    const double p_cov = coverage_probability(net, tau);

    std::vector<double> x, w;
    mlt::quad::gauss_legendre(24, x, w);
    std::vector<double> zetas(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) zetas[i] = 0.5 * (x[i] + 1.0);
    const std::vector<double> meta = meta_distribution_grid(net, tau, zetas, n);
    double integral = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) integral += 0.5 * w[i] * meta[i];

    CHECK(std::abs(integral - p_cov) < 1e-2);
}

TEST_CASE("meta-distribution agrees with the per-realization oracle") {
    const NetworkScenario net = rayleigh_network();
    const double tau = 1.0;
    const std::vector<double> zetas = {0.5};
    const std::vector<double> analytic = meta_distribution_grid(net, tau, zetas, 64);

    mlt::oracle::McConfig mc;
    mc.seed = 17;
    mc.trials = 50000;
    mc.truncation_radius = 20.0;
    const auto [coverage, meta] = mlt::oracle::estimate_coverage_and_meta(net, tau, zetas, mc);
    REQUIRE(meta.size() == 1);
    // finite-N bias plus Monte Carlo noise
    CHECK(std::abs(analytic[0] - meta[0].mean) <= 3.0 * meta[0].std_error + 5e-3);
}

TEST_CASE("scenario validation") {
    CHECK_THROWS_AS(NetworkScenario(0.0, PathLoss::power_law(1.0, 4.0),
                                    FadingModel::exponential(1.0),
                                    FadingModel::exponential(1.0), 0.0),
                    ArgumentError);
    CHECK_THROWS_AS(NetworkScenario(1.0, PathLoss::power_law(1.0, 4.0),
                                    FadingModel::exponential(1.0),
                                    FadingModel::deterministic(1.0), 0.0),
                    ArgumentError);
    // meta requires an exponential signal law
    const NetworkScenario erl(1.0, PathLoss::power_law(1.0, 4.0),
                              FadingModel::exponential(1.0), FadingModel::erlang(2, 2.0),
                              0.0);
    CHECK_THROWS_AS(meta_distribution(erl, 1.0, 0.5, 8), ArgumentError);
}
