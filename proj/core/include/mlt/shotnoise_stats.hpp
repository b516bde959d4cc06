// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <functional>

#include "mlt/campbell.hpp"

namespace mlt::stats {

using campbell::QuadratureConfig;
using campbell::ShotNoiseScenario;
using matfun::UTToeplitzRow;

/// CCDF approximation with its certified sandwich band.
struct CcdfApproxResult {
    double tau = 0.0;
    int order_n = 0;
    double value = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 1.0;
    double epsilon = 0.0;
    double delta = 0.0;
};

/// The scaled negated Erlang sub-generator rate * Q^(order): diagonal rate,
/// superdiagonal -rate. Matrix-LT providers are evaluated at this argument.
struct ScaledErlangGenerator {
    double rate = 1.0;
    int order = 1;
};

/// Produces the first row of a matrix Laplace transform at a scaled Erlang
/// generator argument.
using MatrixLtProvider = std::function<UTToeplitzRow(const ScaledErlangGenerator&)>;

/// Moments [E[I^0], ..., E[I^max_order]] of the combined shot noise via the
/// nilpotent zero-eigenvalue block: the Campbell integral row is strictly
/// upper triangular, so its exponential is a terminating polynomial.
/// Throws InfiniteMomentError naming the first divergent order.
std::vector<double> moments(const ShotNoiseScenario& sc, int max_order,
                            const QuadratureConfig& q = {});

/// Unique positive root of delta - log(1 + delta) = log(epsilon^{-1/N}),
/// solved to residual below 1e-12 by bracketed Newton.
double delta_of_epsilon(int n, double epsilon);

/// Chernoff tail exp(-N (delta - log(1 + delta))) of the Erlang(N, N)
/// smoothing variable.
double erlang_chernoff_tail(int n, double delta);

/// P(X >= tau Z_N) for the random variable behind the provider:
/// 1 - e1^T L_X((N / tau) Q^(N)) 1, clamped to [0, 1] only within 1e-12 of
/// the boundary.
double ccdf_approx_from_mlt(const MatrixLtProvider& mlt, double tau, int n);

/// Erlang-smoothed CCDF approximation of the shot noise with the certified
/// band: lower = P(tau / (1 - delta)) - epsilon and
/// upper = (1 - epsilon)^{-1} P(tau / (1 + delta)).
CcdfApproxResult shot_noise_ccdf(const ShotNoiseScenario& sc, double tau, int n,
                                 double epsilon, const QuadratureConfig& q = {});

} // namespace mlt::stats
