// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include "mlt/campbell.hpp"

namespace mlt::sinr {

using campbell::PathLoss;
using campbell::QuadratureConfig;
using dist::FadingModel;

/// Downlink Poisson cellular scenario: the user sits at the origin and
/// connects to the nearest base station; all other stations interfere.
/// The desired signal power must be phase-type representable.
struct NetworkScenario {
    double bs_intensity = 1.0;
    PathLoss path_loss;
    FadingModel interferer_fading;
    FadingModel signal_power;
    double noise_power = 0.0;

    NetworkScenario(double intensity, PathLoss pl, FadingModel interferer,
                    FadingModel signal, double noise);
};

/// Outer expectation over the serving distance: Gauss-Legendre nodes on
/// [0, R] with R chosen so the nearest-neighbor tail mass stays below
/// tail_mass.
struct OuterQuadrature {
    int nodes = 128;
    double tail_mass = 1e-10;

    void validate() const;
};

struct CoverageCurve {
    std::vector<double> thresholds;
    std::vector<double> probabilities;
    /// Accumulated inner-quadrature error estimate per threshold.
    std::vector<double> diagnostics;
};

/// Density 2 pi lambda r exp(-pi lambda r^2) of the distance to the nearest
/// point of a homogeneous planar PPP.
double nearest_bs_distance_density(double intensity, double r);

/// Coverage probability P(SINR >= tau) with phase-type distributed desired
/// signal power.
double coverage_probability(const NetworkScenario& net, double tau,
                            const OuterQuadrature& outer = {},
                            const QuadratureConfig& q = {});

CoverageCurve coverage_curve(const NetworkScenario& net,
                             const std::vector<double>& taus,
                             const OuterQuadrature& outer = {},
                             const QuadratureConfig& q = {});

/// Order-N approximation of the SINR meta-distribution
/// P(P(SINR >= tau | network) >= zeta) for exponentially distributed desired
/// signal power.
double meta_distribution(const NetworkScenario& net, double tau, double zeta, int n,
                         const OuterQuadrature& outer = {},
                         const QuadratureConfig& q = {});

std::vector<double> meta_distribution_grid(const NetworkScenario& net, double tau,
                                           const std::vector<double>& zetas, int n,
                                           const OuterQuadrature& outer = {},
                                           const QuadratureConfig& q = {});

} // namespace mlt::sinr
