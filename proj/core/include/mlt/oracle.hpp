// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <random>

#include "mlt/campbell.hpp"
#include "mlt/sinr.hpp"

namespace mlt::oracle {

using campbell::Point2;
using campbell::QuadratureConfig;
using campbell::ShotNoiseScenario;
using matfun::Complex;

/// Monte Carlo run description. Identical seed and config give bitwise
/// identical estimates regardless of the thread count: every trial draws from
/// its own counter-derived substream and reductions run in trial order.
struct McConfig {
    std::uint64_t seed = 1;
    std::int64_t trials = 100000;
    double truncation_radius = 20.0;
};

struct EstimateWithCi {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
};

/// Deterministic per-trial engine derived from (seed, trial index).
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

/// One realization of a homogeneous PPP restricted to a disk.
std::vector<Point2> sample_ppp_disk(double intensity, double radius,
                                    std::mt19937_64& rng);

/// Truncation radius for shot-noise simulation: the far-field mean beyond the
/// returned radius is below rel_tol times the total mean. Simulators
/// compensate the dropped far field by its analytic mean, so this controls a
/// second-order residual only.
double choose_truncation_radius(const ShotNoiseScenario& sc, double rel_tol = 1e-4);

/// Per-trial values of the combined shot noise, simulated inside the
/// truncation disk with the analytic far-field mean added back.
std::vector<double> sample_shot_noise(const ShotNoiseScenario& sc, const McConfig& mc);

/// Empirical CCDF with binomial standard errors on a threshold grid.
std::vector<EstimateWithCi> estimate_shot_noise_ccdf(const ShotNoiseScenario& sc,
                                                     const std::vector<double>& tau_grid,
                                                     const McConfig& mc);

/// Coverage by indicator sampling and the meta-distribution by the
/// per-realization analytic conditional success probability. The signal law
/// must be exponential for the meta path; pass an empty zeta grid to skip it.
std::pair<EstimateWithCi, std::vector<EstimateWithCi>> estimate_coverage_and_meta(
    const sinr::NetworkScenario& net, double tau, const std::vector<double>& zeta_grid,
    const McConfig& mc);

/// Partial exponential Bell polynomial B_{j,k}(args[1], ..., args[j-k+1])
/// via the standard recursion. args[i] holds x_i at index i-1.
double bell_polynomial(int j, int k, const std::vector<double>& args);

/// Derivatives of exp(-g(s)) through order j from the derivatives of g:
/// g_derivs[t] = g^{(t)}(s) for t = 0..j.
std::vector<double> exp_composite_derivs(const std::vector<double>& g_derivs, int j);

/// Derivatives f^{(t)}(center) for t = 0..count-1 of an analytic function via
/// the trapezoid rule on a circle of the given radius (spectrally accurate).
std::vector<Complex> cauchy_derivatives(const std::function<Complex(Complex)>& f,
                                        Complex center, double radius, int count,
                                        int nodes = 64);

} // namespace mlt::oracle
