// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "mlt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mlt/parallel.hpp"

namespace mlt::oracle {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// 2 pi lambda int_lo^inf g(r) r dr through u = 1/(1+r).
double radial_mass(const std::function<double(double)>& g, double intensity, double lo) {
    auto integrand = [&](double u, Complex* out) {
        if (u < 1e-100) {
            out[0] = 0.0;
            return;
        }
        const double r = (1.0 - u) / u;
        const double jac = r / (u * u);
        out[0] = std::isfinite(jac) ? g(r) * jac : 0.0;
    };
    quad::AdaptiveOptions opts{1e-12, 1e-9, 2000};
    const double v = quad::integrate_adaptive(integrand, 1, 0.0, 1.0 / (1.0 + lo), opts,
                                              /*divergence_edge=*/0.0)
                         .value[0]
                         .real();
    return 2.0 * std::numbers::pi * intensity * v;
}

EstimateWithCi binomial_estimate(double hits, std::int64_t trials) {
    EstimateWithCi est;
    est.trials = trials;
    est.mean = hits / static_cast<double>(trials);
    est.std_error =
        std::sqrt(std::max(0.0, est.mean * (1.0 - est.mean)) / static_cast<double>(trials));
    return est;
}

} // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL));
}

std::vector<Point2> sample_ppp_disk(double intensity, double radius,
                                    std::mt19937_64& rng) {
    if (!(intensity > 0.0)) throw ArgumentError("intensity must be positive");
    if (!(radius > 0.0)) throw ArgumentError("radius must be positive");
    const double mean = intensity * std::numbers::pi * radius * radius;
    std::poisson_distribution<long> count_dist(mean);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const long count = count_dist(rng);
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        const double r = radius * std::sqrt(unif(rng));
        const double theta = 2.0 * std::numbers::pi * unif(rng);
        pts.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return pts;
}

double choose_truncation_radius(const ShotNoiseScenario& sc, double rel_tol) {
    if (!(rel_tol > 0.0) || !(rel_tol < 1.0))
        throw ArgumentError("rel_tol must lie in (0, 1)");
    const campbell::PathLoss& pl = sc.path_loss;
    auto gain = [&pl](double r) { return pl.field_gain(r); };
    const double total = radial_mass(gain, sc.intensity, pl.exclusion_radius());
    double radius = std::max(1.0, 2.0 * pl.exclusion_radius());
    while (radius < 1e6) {
        if (radial_mass(gain, sc.intensity, radius) <= rel_tol * total) return radius;
        radius *= 1.5;
    }
    return radius;
}

std::vector<double> sample_shot_noise(const ShotNoiseScenario& sc, const McConfig& mc) {
    if (mc.trials < 1) throw ArgumentError("trials must be >= 1");
    if (!(mc.truncation_radius > 0.0))
        throw ArgumentError("truncation radius must be positive");

    const campbell::PathLoss& pl = sc.path_loss;
    Point2 center{0.0, 0.0};
    for (const auto& t : sc.combination) {
        center.x += t.point.x;
        center.y += t.point.y;
    }
    center.x /= static_cast<double>(sc.combination.size());
    center.y /= static_cast<double>(sc.combination.size());

    // The dropped far field is compensated by its analytic mean, leaving only
    // the (much smaller) far-field fluctuation out of the simulation.
    auto gain = [&pl](double r) { return pl.field_gain(r); };
    double weight_sum = 0.0;
    for (const auto& t : sc.combination) weight_sum += t.weight;
    const double far_mean = weight_sum * sc.fading.mean() *
                            radial_mass(gain, sc.intensity, mc.truncation_radius);

    std::vector<double> values(static_cast<std::size_t>(mc.trials), 0.0);
    parallel_for(static_cast<std::size_t>(mc.trials), [&](std::size_t i) {
        std::mt19937_64 rng = substream(mc.seed, i);
        const std::vector<Point2> pts =
            sample_ppp_disk(sc.intensity, mc.truncation_radius, rng);
        double acc = 0.0;
        for (const Point2& offset : pts) {
            const Point2 x{center.x + offset.x, center.y + offset.y};
            if (sc.exclusion &&
                campbell::distance(x, sc.exclusion->center) < sc.exclusion->radius)
                continue;
            for (const auto& t : sc.combination) {
                if (t.weight == 0.0) continue;
                const double g = pl.field_gain(campbell::distance(x, t.point));
                if (g == 0.0) continue;
                acc += t.weight * g * sc.fading.sample(rng);
            }
        }
        values[i] = acc + far_mean;
    });
    return values;
}

std::vector<EstimateWithCi> estimate_shot_noise_ccdf(const ShotNoiseScenario& sc,
                                                     const std::vector<double>& tau_grid,
                                                     const McConfig& mc) {
    const std::vector<double> values = sample_shot_noise(sc, mc);
    std::vector<EstimateWithCi> out;
    out.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        double hits = 0.0;
        for (double v : values) hits += (v >= tau) ? 1.0 : 0.0;
        out.push_back(binomial_estimate(hits, mc.trials));
    }
    return out;
}

std::pair<EstimateWithCi, std::vector<EstimateWithCi>> estimate_coverage_and_meta(
    const sinr::NetworkScenario& net, double tau, const std::vector<double>& zeta_grid,
    const McConfig& mc) {
    if (mc.trials < 1) throw ArgumentError("trials must be >= 1");
    if (!(tau > 0.0)) throw ArgumentError("tau must be positive");
    const bool want_meta = !zeta_grid.empty();
    const auto* exp_signal = net.signal_power.as_exponential();
    if (want_meta && !exp_signal)
        throw ArgumentError("meta-distribution sampling requires exponential signal power");

    const campbell::PathLoss& pl = net.path_loss;
    auto gain = [&pl](double r) { return pl.field_gain(r); };
    const double far_tail = radial_mass(gain, net.bs_intensity, mc.truncation_radius);
    const double far_mean = net.interferer_fading.mean() * far_tail;

    std::vector<char> covered(static_cast<std::size_t>(mc.trials), 0);
    std::vector<double> success(static_cast<std::size_t>(mc.trials), 0.0);

    parallel_for(static_cast<std::size_t>(mc.trials), [&](std::size_t i) {
        std::mt19937_64 rng = substream(mc.seed, i);
        const std::vector<Point2> pts =
            sample_ppp_disk(net.bs_intensity, mc.truncation_radius, rng);
        if (pts.empty()) return; // vanishing probability at any sane radius

        std::size_t nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const double d2 = pts[k].x * pts[k].x + pts[k].y * pts[k].y;
            if (d2 < best) {
                best = d2;
                nearest = k;
            }
        }
        const double r0 = std::sqrt(best);
        const double serving = pl.gain(r0);

        double interference = far_mean;
        double log_ps = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (k == nearest) continue;
            const double d = std::hypot(pts[k].x, pts[k].y);
            if (d < r0) continue; // cannot happen, nearest excluded
            const double g = pl.field_gain(d);
            if (g == 0.0) continue;
            interference += g * net.interferer_fading.sample(rng);
            if (want_meta) {
                const double s = exp_signal->rate * tau * g / serving;
                const double d =
                    dist::one_minus_lt(net.interferer_fading, Complex(s)).real();
                log_ps += std::log1p(-d);
            }
        }

        const double p_y = net.signal_power.sample(rng);
        covered[i] = p_y * serving >= tau * (interference + net.noise_power) ? 1 : 0;

        if (want_meta) {
            // First-order far-field factor: -log L_H(s) ~ s E[F] for small s.
            const double noise_term = exp_signal->rate * tau * net.noise_power / serving;
            const double far_term = exp_signal->rate * tau * far_mean / serving;
            success[i] = std::exp(log_ps - noise_term - far_term);
        }
    });

    double cov_hits = 0.0;
    for (char c : covered) cov_hits += c;
    EstimateWithCi coverage = binomial_estimate(cov_hits, mc.trials);

    std::vector<EstimateWithCi> meta;
    meta.reserve(zeta_grid.size());
    for (double zeta : zeta_grid) {
        double hits = 0.0;
        for (double s : success) hits += (s >= zeta) ? 1.0 : 0.0;
        meta.push_back(binomial_estimate(hits, mc.trials));
    }
    return {coverage, meta};
}

double bell_polynomial(int j, int k, const std::vector<double>& args) {
    if (j < 0 || k < 0 || k > j) throw ArgumentError("bell_polynomial requires 0 <= k <= j");
    if (k > 0 && static_cast<int>(args.size()) < j - k + 1)
        throw ArgumentError("bell_polynomial needs j - k + 1 arguments");
    if (j == 0 && k == 0) return 1.0;
    if (k == 0) return 0.0;

    // Pascal triangle up to j-1.
    std::vector<std::vector<double>> choose(j, std::vector<double>(j, 0.0));
    for (int m = 0; m < j; ++m) {
        choose[m][0] = 1.0;
        for (int i = 1; i <= m; ++i)
            choose[m][i] = choose[m - 1][i - 1] + (i <= m - 1 ? choose[m - 1][i] : 0.0);
    }

    std::vector<std::vector<double>> b(j + 1, std::vector<double>(k + 1, 0.0));
    b[0][0] = 1.0;
    for (int m = 1; m <= j; ++m) {
        for (int l = 1; l <= std::min(m, k); ++l) {
            double acc = 0.0;
            for (int i = 1; i <= m - l + 1; ++i) {
                if (i > static_cast<int>(args.size())) break;
                acc += choose[m - 1][i - 1] * args[i - 1] * b[m - i][l - 1];
            }
            b[m][l] = acc;
        }
    }
    return b[j][k];
}

std::vector<double> exp_composite_derivs(const std::vector<double>& g_derivs, int j) {
    if (j < 0) throw ArgumentError("derivative order must be >= 0");
    if (static_cast<int>(g_derivs.size()) < j + 1)
        throw ArgumentError("need g derivatives through order j");
    const double base = std::exp(-g_derivs[0]);
    const std::vector<double> args(g_derivs.begin() + 1, g_derivs.end());
    std::vector<double> out(j + 1, 0.0);
    out[0] = base;
    for (int t = 1; t <= j; ++t) {
        double acc = 0.0;
        double sign = 1.0;
        for (int k = 0; k <= t; ++k) {
            acc += sign * bell_polynomial(t, k, args);
            sign = -sign;
        }
        out[t] = base * acc;
    }
    return out;
}

std::vector<Complex> cauchy_derivatives(const std::function<Complex(Complex)>& f,
                                        Complex center, double radius, int count,
                                        int nodes) {
    if (!(radius > 0.0)) throw ArgumentError("radius must be positive");
    if (count < 1) throw ArgumentError("count must be >= 1");
    if (nodes < 2 * count) nodes = 2 * count;

    std::vector<Complex> samples(nodes);
    for (int m = 0; m < nodes; ++m) {
        const double theta = 2.0 * std::numbers::pi * m / nodes;
        samples[m] = f(center + radius * Complex(std::cos(theta), std::sin(theta)));
    }
    std::vector<Complex> out(count);
    double factorial = 1.0;
    for (int t = 0; t < count; ++t) {
        if (t > 0) factorial *= t;
        Complex acc = 0.0;
        for (int m = 0; m < nodes; ++m) {
            const double theta = 2.0 * std::numbers::pi * m / nodes;
            acc += samples[m] * Complex(std::cos(t * theta), -std::sin(t * theta));
        }
        out[t] = factorial * acc / (static_cast<double>(nodes) * std::pow(radius, t));
    }
    return out;
}

} // namespace mlt::oracle
