// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "mlt/shotnoise_stats.hpp"

#include <cmath>

namespace mlt::stats {

using matfun::Complex;

std::vector<double> moments(const ShotNoiseScenario& sc, int max_order,
                            const QuadratureConfig& q) {
    if (max_order < 0) throw ArgumentError("max_order must be >= 0");
    std::vector<double> out(max_order + 1, 1.0);
    if (max_order == 0) return out;

    const campbell::detail::FieldSpec field = campbell::detail::make_field(sc);
    for (int k = 1; k <= max_order; ++k)
        if (!campbell::detail::moment_condition_ok(field, k, q))
            throw InfiniteMomentError(
                "shot-noise moment of order " + std::to_string(k) + " is infinite", k);

    const int n = max_order + 1;
    const UTToeplitzRow integral =
        campbell::detail::campbell_integral_bidiag(field, 0.0, 1.0, n, q);
    const UTToeplitzRow lt = matfun::expm_ut_toeplitz(-integral);

    double sign = 1.0, factorial = 1.0;
    for (int j = 1; j <= max_order; ++j) {
        sign = -sign;
        factorial *= j;
        out[j] = sign * factorial * lt.row[j].real();
    }
    return out;
}

double delta_of_epsilon(int n, double epsilon) {
    if (n < 1) throw ArgumentError("N must be >= 1");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw ArgumentError("epsilon must lie in (0, 1)");

    const double target = std::log(1.0 / epsilon) / n;
    auto f = [](double d) { return d - std::log1p(d); };

    double lo = 1e-12;
    double hi = 50.0;
    while (f(hi) < target) hi *= 2.0;

    // f is smooth and strictly increasing on (0, inf); Newton from a point
    // where f >= target converges monotonically, bisection guards the rest.
    double x = std::max(std::sqrt(2.0 * target), lo);
    for (int iter = 0; iter < 200; ++iter) {
        const double r = f(x) - target;
        if (std::abs(r) < 1e-12) return x;
        if (r > 0.0)
            hi = x;
        else
            lo = x;
        const double deriv = x / (1.0 + x);
        double next = deriv > 0.0 ? x - r / deriv : 0.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    return x;
}

double erlang_chernoff_tail(int n, double delta) {
    if (n < 1) throw ArgumentError("N must be >= 1");
    if (!(delta > 0.0)) throw ArgumentError("delta must be positive");
    return std::exp(-n * (delta - std::log1p(delta)));
}

double ccdf_approx_from_mlt(const MatrixLtProvider& mlt, double tau, int n) {
    if (!(tau > 0.0)) throw ArgumentError("tau must be positive");
    if (n < 1) throw ArgumentError("N must be >= 1");

    const UTToeplitzRow row = mlt(ScaledErlangGenerator{n / tau, n});
    if (row.order() != n)
        throw ArgumentError("matrix-LT provider returned a row of the wrong order");
    Complex sum = 0.0;
    for (const Complex& v : row.row) sum += v;
    double value = 1.0 - sum.real();
    if (value < 0.0 && value >= -1e-12) value = 0.0;
    if (value > 1.0 && value <= 1.0 + 1e-12) value = 1.0;
    return value;
}

CcdfApproxResult shot_noise_ccdf(const ShotNoiseScenario& sc, double tau, int n,
                                 double epsilon, const QuadratureConfig& q) {
    if (!(tau > 0.0)) throw ArgumentError("tau must be positive");
    if (n < 1) throw ArgumentError("N must be >= 1");

    const campbell::FinitenessReport finite = campbell::finiteness_check(sc, {1.0}, q);
    if (!finite.finite)
        throw DivergentIntegralError("shot noise is infinite a.s. for this scenario", 0);

    MatrixLtProvider provider = [&sc, &q](const ScaledErlangGenerator& g) {
        return campbell::shot_noise_matrix_lt_scaled_erlang(sc, g.rate, g.order, q);
    };

    CcdfApproxResult res;
    res.tau = tau;
    res.order_n = n;
    res.epsilon = epsilon;
    res.delta = delta_of_epsilon(n, epsilon);
    res.value = ccdf_approx_from_mlt(provider, tau, n);
    // The lower-bound argument tau / (1 - delta) needs delta < 1; otherwise
    // only the trivial bound remains.
    res.lower_bound = res.delta < 1.0
                          ? ccdf_approx_from_mlt(provider, tau / (1.0 - res.delta), n) -
                                epsilon
                          : 0.0;
    res.upper_bound = ccdf_approx_from_mlt(provider, tau / (1.0 + res.delta), n) /
                      (1.0 - epsilon);
    return res;
}

} // namespace mlt::stats
