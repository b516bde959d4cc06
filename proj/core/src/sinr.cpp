// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "mlt/sinr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace mlt::sinr {

namespace {

using dist::PhaseType;
using matfun::Complex;
using matfun::ComplexMatrix;
using matfun::UTToeplitzRow;
using quad::AdaptiveOptions;

constexpr double kTinyU = 1e-100;

PhaseType signal_phase_type(const FadingModel& signal) {
    if (const auto* e = signal.as_exponential()) return PhaseType::exponential(e->rate);
    if (const auto* g = signal.as_erlang()) return PhaseType::erlang(g->shape, g->rate);
    if (const auto* ph = signal.as_phase_type()) return *ph;
    throw ArgumentError("signal power must be exponential, Erlang, or phase-type");
}

// Integral of f(r) r dr over [r_lo, inf) through u = 1/(1+r), vector-valued.
quad::IntegralResult radial_integral(const std::function<void(double, Complex*)>& f,
                                     int dim, double r_lo, const AdaptiveOptions& opts) {
    auto integrand = [&](double u, Complex* out) {
        if (u < kTinyU) {
            std::fill(out, out + dim, Complex(0.0));
            return;
        }
        const double r = (1.0 - u) / u;
        const double jac = r / (u * u);
        if (!std::isfinite(jac)) {
            std::fill(out, out + dim, Complex(0.0));
            return;
        }
        f(r, out);
        for (int j = 0; j < dim; ++j) out[j] *= jac;
    };
    return quad::integrate_adaptive(integrand, dim, 0.0, 1.0 / (1.0 + r_lo), opts,
                                    /*divergence_edge=*/0.0);
}

struct OuterNodes {
    std::vector<double> radius;
    std::vector<double> weight; // includes the nearest-distance density
};

OuterNodes outer_nodes(double intensity, const OuterQuadrature& outer) {
    outer.validate();
    const double r_cap =
        std::sqrt(std::log(1.0 / outer.tail_mass) / (std::numbers::pi * intensity));
    std::vector<double> x, w;
    quad::gauss_legendre(outer.nodes, x, w);
    OuterNodes nodes;
    nodes.radius.resize(outer.nodes);
    nodes.weight.resize(outer.nodes);
    for (int i = 0; i < outer.nodes; ++i) {
        const double r = 0.5 * r_cap * (x[i] + 1.0);
        const double jac = 0.5 * r_cap;
        nodes.radius[i] = r;
        nodes.weight[i] = w[i] * jac * nearest_bs_distance_density(intensity, r);
    }
    return nodes;
}

double clamp_probability(double v) {
    if (v < 0.0 && v >= -1e-9) return 0.0;
    if (v > 1.0 && v <= 1.0 + 1e-9) return 1.0;
    return v;
}

} // namespace

NetworkScenario::NetworkScenario(double intensity, PathLoss pl, FadingModel interferer,
                                 FadingModel signal, double noise)
    : bs_intensity(intensity),
      path_loss(std::move(pl)),
      interferer_fading(std::move(interferer)),
      signal_power(std::move(signal)),
      noise_power(noise) {
    if (!(bs_intensity > 0.0) || !std::isfinite(bs_intensity))
        throw ArgumentError("base station intensity must be positive");
    if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
        throw ArgumentError("noise power must be >= 0");
    if (signal_power.is_deterministic())
        throw ArgumentError("signal power must be exponential, Erlang, or phase-type");
}

void OuterQuadrature::validate() const {
    if (nodes < 2) throw ArgumentError("outer quadrature needs at least 2 nodes");
    if (!(tail_mass > 0.0) || !(tail_mass < 1.0))
        throw ArgumentError("outer tail mass must lie in (0, 1)");
}

double nearest_bs_distance_density(double intensity, double r) {
    if (!(intensity > 0.0)) throw ArgumentError("intensity must be positive");
    if (r < 0.0) throw ArgumentError("distance must be >= 0");
    return 2.0 * std::numbers::pi * intensity * r *
           std::exp(-std::numbers::pi * intensity * r * r);
}

double coverage_probability(const NetworkScenario& net, double tau,
                            const OuterQuadrature& outer, const QuadratureConfig& q) {
    return coverage_curve(net, {tau}, outer, q).probabilities[0];
}

CoverageCurve coverage_curve(const NetworkScenario& net, const std::vector<double>& taus,
                             const OuterQuadrature& outer, const QuadratureConfig& q) {
    q.validate();
    for (double tau : taus)
        if (!(tau > 0.0)) throw ArgumentError("tau must be positive");

    const PhaseType ph = signal_phase_type(net.signal_power);
    const int n = ph.phases();
    const Eigen::MatrixXd& s = ph.negated_subgenerator();
    const Eigen::VectorXd& p = ph.sub_pmf();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const AdaptiveOptions opts{q.abs_tol, q.rel_tol, q.max_subdivisions};
    const OuterNodes nodes = outer_nodes(net.bs_intensity, outer);
    const double two_pi_lambda = 2.0 * std::numbers::pi * net.bs_intensity;

    CoverageCurve curve;
    curve.thresholds = taus;
    curve.probabilities.assign(taus.size(), 0.0);
    curve.diagnostics.assign(taus.size(), 0.0);

    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        const double tau = taus[ti];
        double acc = 0.0, err_acc = 0.0;
        for (std::size_t i = 0; i < nodes.radius.size(); ++i) {
            const double r0 = nodes.radius[i];
            const double serving_gain = net.path_loss.gain(r0);
            const double r_lo = std::max(r0, net.path_loss.exclusion_radius());

            auto deficit = [&](double r, Complex* out) {
                const double c = tau * net.path_loss.field_gain(r) / serving_gain;
                if (c == 0.0) {
                    std::fill(out, out + n * n, Complex(0.0));
                    return;
                }
                const ComplexMatrix arg(Eigen::MatrixXcd(c * s.cast<Complex>()));
                const ComplexMatrix d =
                    dist::one_minus_matrix_lt_dense(net.interferer_fading, arg);
                for (int col = 0, idx = 0; col < n; ++col)
                    for (int row = 0; row < n; ++row, ++idx) out[idx] = d(row, col);
            };

            const quad::IntegralResult inner = radial_integral(deficit, n * n, r_lo, opts);
            Eigen::MatrixXcd m(n, n);
            double err = 0.0;
            for (int col = 0, idx = 0; col < n; ++col)
                for (int row = 0; row < n; ++row, ++idx) {
                    m(row, col) = two_pi_lambda * inner.value[idx];
                    err += inner.error_estimate[idx];
                }

            Eigen::MatrixXcd factor = (-m).exp();
            if (net.noise_power > 0.0) {
                const double scale = tau * net.noise_power / serving_gain;
                factor *= (-scale * s).exp().cast<Complex>();
            }
            const Complex val =
                p.cast<Complex>().transpose() * factor * ones.cast<Complex>();
            acc += nodes.weight[i] * val.real();
            err_acc += nodes.weight[i] * err * two_pi_lambda;
        }
        curve.probabilities[ti] = clamp_probability(acc);
        curve.diagnostics[ti] = err_acc;
    }
    return curve;
}

double meta_distribution(const NetworkScenario& net, double tau, double zeta, int n,
                         const OuterQuadrature& outer, const QuadratureConfig& q) {
    return meta_distribution_grid(net, tau, {zeta}, n, outer, q)[0];
}

std::vector<double> meta_distribution_grid(const NetworkScenario& net, double tau,
                                           const std::vector<double>& zetas, int n,
                                           const OuterQuadrature& outer,
                                           const QuadratureConfig& q) {
    q.validate();
    if (!(tau > 0.0)) throw ArgumentError("tau must be positive");
    if (n < 1) throw ArgumentError("N must be >= 1");
    const auto* exp_signal = net.signal_power.as_exponential();
    if (!exp_signal)
        throw ArgumentError("meta-distribution requires exponential signal power");
    const double lambda_s = exp_signal->rate;
    for (double z : zetas)
        if (!(z > 0.0) || !(z < 1.0)) throw ArgumentError("zeta must lie in (0, 1)");

    const AdaptiveOptions opts{q.abs_tol, q.rel_tol, q.max_subdivisions};
    const OuterNodes nodes = outer_nodes(net.bs_intensity, outer);
    const double two_pi_lambda = 2.0 * std::numbers::pi * net.bs_intensity;

    std::vector<double> out(zetas.size(), 0.0);
    for (std::size_t zi = 0; zi < zetas.size(); ++zi) {
        const double zeta = zetas[zi];
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.radius.size(); ++i) {
            const double r0 = nodes.radius[i];
            const double serving_gain = net.path_loss.gain(r0);
            const double budget =
                std::log(1.0 / zeta) - lambda_s * tau * net.noise_power / serving_gain;
            // Noise alone exceeds the log-budget: the conditional event has
            // probability zero.
            if (!(budget > 0.0)) continue;
            const double r_lo = std::max(r0, net.path_loss.exclusion_radius());
            const double beta_scale = n / budget;

            auto deficit = [&](double r, Complex* out_row) {
                const double c =
                    lambda_s * tau * net.path_loss.field_gain(r) / serving_gain;
                double g = 0.0;
                if (c > 0.0) {
                    // -log L = -log1p(-(1 - L)), stable in the far field
                    const double d =
                        dist::one_minus_lt(net.interferer_fading, Complex(c)).real();
                    g = d < 1.0 ? -std::log1p(-d)
                                : std::numeric_limits<double>::infinity();
                }
                const double beta = beta_scale * g;
                if (!(beta > 0.0)) {
                    std::fill(out_row, out_row + n, Complex(0.0));
                    return;
                }
                // e1 - e^{-beta} [1, beta, beta^2/2!, ...]
                const double e = std::exp(-beta);
                out_row[0] = -std::expm1(-beta);
                double term = e;
                for (int t = 1; t < n; ++t) {
                    term *= beta / t;
                    out_row[t] = -term;
                }
            };

            const quad::IntegralResult inner = radial_integral(deficit, n, r_lo, opts);
            std::vector<Complex> s_row(n);
            for (int t = 0; t < n; ++t) s_row[t] = two_pi_lambda * inner.value[t];
            const UTToeplitzRow lt = matfun::expm_ut_toeplitz(-UTToeplitzRow(s_row));
            Complex cond = 0.0;
            for (const Complex& v : lt.row) cond += v;
            acc += nodes.weight[i] * std::clamp(cond.real(), 0.0, 1.0);
        }
        out[zi] = clamp_probability(acc);
    }
    return out;
}

} // namespace mlt::sinr
