// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "mlt/campbell.hpp"

#include <cmath>
#include <numbers>

namespace mlt::campbell {

namespace {

constexpr double kTinyU = 1e-100;       // below this the mapped radius is numerically infinite
constexpr double kTailRadiusCap = 1e12; // marching cap for convergence diagnostics
constexpr int kAngularPanels = 64;

using quad::AdaptiveOptions;

AdaptiveOptions to_options(const QuadratureConfig& q) {
    return AdaptiveOptions{q.abs_tol, q.rel_tol, q.max_subdivisions};
}

// Per-term first row of L_H(c B(s0, s1)) with overflow guards for singular
// attenuation. c = +inf is the hard-interference limit: only the atom at zero
// survives when Re(s0) > 0.
void term_row(const dist::FadingModel& fading, double c, Complex s0, Complex s1,
              int order, std::vector<Complex>& out) {
    out.assign(order, 0.0);
    if (c == 0.0) {
        out[0] = 1.0;
        return;
    }
    const Complex cs0 = c * s0;
    const Complex cs1 = c * s1;
    const bool finite_arg = std::isfinite(cs0.real()) && std::isfinite(cs0.imag()) &&
                            std::isfinite(cs1.real()) && std::isfinite(cs1.imag());
    if (!finite_arg) {
        if (s0.real() > 0.0) {
            out[0] = fading.atom_at_zero();
            return;
        }
        throw DomainError("attenuation overflow with non-dissipative eigenvalue");
    }
    const matfun::UTToeplitzRow row = dist::matrix_lt_bidiag(fading, cs0, cs1, order);
    out = row.row;
}

void convolve_in_place(std::vector<Complex>& acc, const std::vector<Complex>& b,
                       std::vector<Complex>& scratch) {
    const int n = static_cast<int>(acc.size());
    scratch.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (acc[i] == 0.0) continue;
        for (int j = 0; i + j < n; ++j) scratch[i + j] += acc[i] * b[j];
    }
    acc.swap(scratch);
}

// 1 - L_H(c s0), formed without subtracting two nearby numbers. The far field
// has c orders of magnitude below machine epsilon; a naive 1 - L there is pure
// rounding noise that derails adaptive refinement.
Complex stable_deficit0(const dist::FadingModel& fading, double c, Complex s0) {
    if (c == 0.0) return 0.0;
    const Complex cs0 = c * s0;
    if (!std::isfinite(cs0.real()) || !std::isfinite(cs0.imag())) {
        if (s0.real() > 0.0) return 1.0 - fading.atom_at_zero();
        throw DomainError("attenuation overflow with non-dissipative eigenvalue");
    }
    return dist::one_minus_lt(fading, cs0);
}

struct RowEvaluator {
    const detail::FieldSpec* field;
    Complex s0, s1;
    int order;
    mutable std::vector<Complex> term, scratch;

    // e1 - prod_i L_H(c_i B) at the point x. Entry 0 comes from the stable
    // per-term deficits d_i through 1 - prod(1 - d_i); higher entries are
    // plain convolution terms (products, no cancellation).
    void deficit_at_point(const Point2& x, Complex* out) const {
        std::vector<Complex> acc;
        Complex deficit0 = 0.0;
        bool first = true;
        for (const auto& t : field->terms) {
            const double c =
                t.weight == 0.0 ? 0.0 : t.weight * field->field_gain(distance(x, t.point));
            const Complex d = stable_deficit0(field->fading, c, s0);
            deficit0 = deficit0 + d - deficit0 * d;
            if (order == 1) continue;
            term_row(field->fading, c, s0, s1, order, term);
            if (first) {
                acc = term;
                first = false;
            } else {
                convolve_in_place(acc, term, scratch);
            }
        }
        out[0] = deficit0;
        for (int j = 1; j < order; ++j) out[j] = -acc[j];
    }

    // Single-term-at-origin specialization by distance.
    void deficit_at_distance(double r, Complex* out) const {
        const double w = field->terms[0].weight;
        const double c = w == 0.0 ? 0.0 : w * field->field_gain(r);
        out[0] = stable_deficit0(field->fading, c, s0);
        if (order == 1) return;
        term_row(field->fading, c, s0, s1, order, term);
        for (int j = 1; j < order; ++j) out[j] = -term[j];
    }
};

bool hole_centered_on(const detail::FieldSpec& field, const Point2& p) {
    if (!field.hole) return true;
    return distance(field.hole->center, p) <= 1e-12 * std::max(1.0, field.hole->radius);
}

// Radial integral of f(r) r dr over [r_lo, inf), mapped through u = 1/(1+r).
std::vector<Complex> radial_integral(const std::function<void(double, Complex*)>& deficit,
                                     int dim, double r_lo, const AdaptiveOptions& opts) {
    const double u_hi = 1.0 / (1.0 + r_lo);
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
        deficit(r, out);
        for (int j = 0; j < dim; ++j) out[j] *= jac;
    };
    return quad::integrate_adaptive(integrand, dim, 0.0, u_hi, opts,
                                    /*divergence_edge=*/0.0)
        .value;
}

// Finite radial piece in plain r coordinates.
std::vector<Complex> radial_integral_finite(
    const std::function<void(double, Complex*)>& deficit, int dim, double a, double b,
    const AdaptiveOptions& opts) {
    auto integrand = [&](double r, Complex* out) {
        deficit(r, out);
        for (int j = 0; j < dim; ++j) out[j] *= r;
    };
    return quad::integrate_adaptive(integrand, dim, a, b, opts).value;
}

// Marching convergence test for a nonnegative radial integrand g(r) r dr:
// annulus contributions must decay below tol * (|acc| + 1) before the radius
// cap. Returns {converged, radius_reached, last_piece}.
struct MarchResult {
    bool converged = false;
    double radius = 0.0;
    double piece = 0.0;
};

MarchResult march_tail(const std::function<double(double)>& g, double r_lo, double tol) {
    AdaptiveOptions opts{1e-16, 1e-6, 400};
    auto piece_integrand = [&](double r, Complex* out) { out[0] = g(r) * r; };
    double acc = 0.0;
    double lo = r_lo;
    double hi = std::max(1.0, 2.0 * std::max(r_lo, 0.5));
    double prev_piece = -1.0;
    int decaying = 0;
    MarchResult res;
    for (int j = 0; j < 60; ++j) {
        double piece;
        try {
            piece =
                quad::integrate_adaptive(piece_integrand, 1, lo, hi, opts).value[0].real();
        } catch (const Error&) {
            return res;
        }
        if (!std::isfinite(piece)) return res;
        acc += piece;
        res.radius = hi;
        res.piece = std::abs(piece);
        if (res.piece < tol * (std::abs(acc) + 1.0)) {
            res.converged = true;
            return res;
        }
        // Annulus doubling shrinks contributions geometrically exactly when
        // the tail is integrable; persistent decay counts as convergence even
        // if the absolute threshold lies beyond the radius cap.
        if (prev_piece > 0.0 && res.piece < 0.95 * prev_piece)
            ++decaying;
        else
            decaying = 0;
        if (decaying >= 4) {
            res.converged = true;
            return res;
        }
        prev_piece = res.piece;
        if (hi >= kTailRadiusCap) return res;
        lo = hi;
        hi *= 2.0;
    }
    return res;
}

// Near-field counterpart, marching [r/2, r] toward the origin.
bool head_converges(const std::function<double(double)>& g, double tol) {
    AdaptiveOptions opts{1e-16, 1e-6, 400};
    auto piece_integrand = [&](double r, Complex* out) { out[0] = g(r) * r; };
    double acc = 0.0;
    double hi = 1.0;
    for (int j = 0; j < 60; ++j) {
        const double lo = hi / 2.0;
        double piece;
        try {
            piece = quad::integrate_adaptive(piece_integrand, 1, lo, hi, opts)
                        .value[0]
                        .real();
        } catch (const Error&) {
            return false;
        }
        if (!std::isfinite(piece)) return false;
        acc += piece;
        if (std::abs(piece) < tol * (std::abs(acc) + 1.0)) return true;
        if (lo < 1e-14) return false;
        hi = lo;
    }
    return false;
}

} // namespace

double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

PathLoss PathLoss::power_law(double k, double alpha, double exclusion_radius) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ArgumentError("path loss scale must be positive");
    if (!(alpha > 2.0) || !std::isfinite(alpha))
        throw ArgumentError("path loss exponent must exceed 2");
    if (!(exclusion_radius >= 0.0) || !std::isfinite(exclusion_radius))
        throw ArgumentError("exclusion radius must be >= 0");
    return PathLoss(Law(PowerLawModel{k, alpha, exclusion_radius}));
}

PathLoss PathLoss::bounded_power_law(double k, double alpha) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ArgumentError("path loss scale must be positive");
    if (!(alpha > 2.0) || !std::isfinite(alpha))
        throw ArgumentError("path loss exponent must exceed 2");
    return PathLoss(Law(BoundedModel{k, alpha}));
}

double PathLoss::gain(double r) const {
    if (r < 0.0) throw ArgumentError("distance must be >= 0");
    if (const auto* p = std::get_if<PowerLawModel>(&law_))
        return p->k * std::pow(r, -p->alpha);
    const auto& b = std::get<BoundedModel>(law_);
    return b.k / (1.0 + std::pow(r, b.alpha));
}

double PathLoss::field_gain(double r) const {
    if (const auto* p = std::get_if<PowerLawModel>(&law_))
        if (r < p->exclusion) return 0.0;
    return gain(r);
}

double PathLoss::inverse(double g) const {
    if (!(g > 0.0)) throw ArgumentError("gain must be positive to invert");
    if (const auto* p = std::get_if<PowerLawModel>(&law_))
        return std::pow(p->k / g, 1.0 / p->alpha);
    const auto& b = std::get<BoundedModel>(law_);
    if (g >= b.k) return 0.0;
    return std::pow(b.k / g - 1.0, 1.0 / b.alpha);
}

double PathLoss::alpha() const {
    if (const auto* p = std::get_if<PowerLawModel>(&law_)) return p->alpha;
    return std::get<BoundedModel>(law_).alpha;
}

double PathLoss::scale() const {
    if (const auto* p = std::get_if<PowerLawModel>(&law_)) return p->k;
    return std::get<BoundedModel>(law_).k;
}

double PathLoss::exclusion_radius() const {
    if (const auto* p = std::get_if<PowerLawModel>(&law_)) return p->exclusion;
    return 0.0;
}

bool PathLoss::singular_at_origin() const {
    if (const auto* p = std::get_if<PowerLawModel>(&law_)) return p->exclusion == 0.0;
    return false;
}

ShotNoiseScenario::ShotNoiseScenario(double intensity_pp, PathLoss pl, FadingModel fade)
    : ShotNoiseScenario(intensity_pp, std::move(pl), std::move(fade),
                        {{1.0, {0.0, 0.0}}}) {}

ShotNoiseScenario::ShotNoiseScenario(double intensity_pp, PathLoss pl, FadingModel fade,
                                     std::vector<CombinationTerm> terms,
                                     std::optional<Hole> hole)
    : intensity(intensity_pp),
      path_loss(std::move(pl)),
      fading(std::move(fade)),
      combination(std::move(terms)),
      exclusion(hole) {
    if (!(intensity > 0.0) || !std::isfinite(intensity))
        throw ArgumentError("intensity must be positive");
    if (combination.empty()) throw ArgumentError("at least one combination term required");
    for (const auto& t : combination)
        if (!(t.weight >= 0.0) || !std::isfinite(t.weight))
            throw ArgumentError("combination weights must be nonnegative");
    for (std::size_t i = 0; i < combination.size(); ++i)
        for (std::size_t j = i + 1; j < combination.size(); ++j)
            if (distance(combination[i].point, combination[j].point) == 0.0)
                throw ArgumentError("combination sample points must be distinct");
    if (exclusion && (!(exclusion->radius >= 0.0) || !std::isfinite(exclusion->radius)))
        throw ArgumentError("exclusion radius must be >= 0");
}

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions <= 0 ||
        !(tail_truncation_tol > 0.0))
        throw ArgumentError("quadrature configuration values must be strictly positive");
}

namespace detail {

FieldSpec make_field(const ShotNoiseScenario& sc) {
    FieldSpec field;
    field.intensity = sc.intensity;
    field.fading = sc.fading;
    PathLoss pl = sc.path_loss;
    field.field_gain = [pl](double r) { return pl.field_gain(r); };
    field.terms = sc.combination;
    field.hole = sc.exclusion;
    field.inner_support_radius = sc.path_loss.exclusion_radius();
    return field;
}

UTToeplitzRow field_row(const FieldSpec& field, Complex s0, Complex s1, int order,
                        const Point2& x) {
    RowEvaluator eval{&field, s0, s1, order, {}, {}};
    std::vector<Complex> out(order);
    eval.deficit_at_point(x, out.data());
    // deficit is e1 - product; undo to return the product row itself
    for (Complex& v : out) v = -v;
    out[0] += 1.0;
    return UTToeplitzRow(std::move(out));
}

bool moment_condition_ok(const FieldSpec& field, int order, const QuadratureConfig& q) {
    if (order <= 0) return true;
    for (const auto& t : field.terms) {
        if (t.weight == 0.0) continue;
        auto g = [&](double r) {
            return std::pow(t.weight * field.field_gain(r), order);
        };
        // the near-field check owns [0, 1]; start the tail march beyond it
        const double tail_lo = std::max(1.0, 2.0 * field.inner_support_radius);
        if (!march_tail(g, tail_lo, q.tail_truncation_tol).converged) return false;
        const bool excised =
            field.inner_support_radius > 0.0 ||
            (field.hole &&
             distance(field.hole->center, t.point) < field.hole->radius - 1e-12);
        if (!excised && !head_converges(g, q.tail_truncation_tol)) return false;
    }
    return true;
}

FinitenessDiagnostic scalar_tail_diagnostic(const FieldSpec& field, double s,
                                            const QuadratureConfig& q) {
    FinitenessDiagnostic diag;
    diag.s = s;
    diag.converged = true;
    const double scale = 2.0 * std::numbers::pi * field.intensity;
    for (const auto& t : field.terms) {
        if (t.weight == 0.0) continue;
        auto g = [&](double r) {
            const double c = t.weight * field.field_gain(r);
            return scale * stable_deficit0(field.fading, c, Complex(s)).real();
        };
        MarchResult res = march_tail(g, field.inner_support_radius, q.tail_truncation_tol);
        diag.converged = diag.converged && res.converged;
        diag.truncation_radius = std::max(diag.truncation_radius, res.radius);
        diag.tail_magnitude = std::max(diag.tail_magnitude, res.piece);
    }
    return diag;
}

UTToeplitzRow campbell_integral_bidiag(const FieldSpec& field, Complex s0, Complex s1,
                                       int order, const QuadratureConfig& q) {
    q.validate();
    if (order < 1) throw ArgumentError("order must be >= 1");
    if (field.terms.empty()) throw ArgumentError("field needs at least one term");
    if (s0.real() < 0.0)
        throw NonconvergentTransformError(
            "Campbell integral requires eigenvalues with Re >= 0");
    if (s0.real() == 0.0) {
        if (s0 == Complex(0.0) && order == 1)
            return UTToeplitzRow(std::vector<Complex>{0.0});
        if (!moment_condition_ok(field, order - 1, q))
            throw NonconvergentTransformError(
                "moment condition for a non-dissipative eigenvalue fails: "
                "int E[H^" +
                std::to_string(order - 1) + "] is divergent");
    }

    // Scalar dichotomy first: the row integral exists only when the scalar
    // deficit tail is integrable, and that must surface as the typed error
    // rather than as a runaway relative-tolerance pass.
    if (s0 != Complex(0.0)) {
        for (const auto& t : field.terms) {
            if (t.weight == 0.0) continue;
            auto g = [&](double r) {
                return std::abs(
                    stable_deficit0(field.fading, t.weight * field.field_gain(r), s0));
            };
            if (!march_tail(g, std::max(1.0, 2.0 * field.inner_support_radius),
                            q.tail_truncation_tol)
                     .converged)
                throw DivergentIntegralError(
                    "scalar Campbell integral tail is not integrable", 0);
        }
    }

    const AdaptiveOptions opts = to_options(q);
    RowEvaluator eval{&field, s0, s1, order, {}, {}};

    const bool isotropic =
        field.terms.size() == 1 && hole_centered_on(field, field.terms[0].point);

    if (isotropic) {
        const double hole_r = field.hole ? field.hole->radius : 0.0;
        const double r_lo = std::max(field.inner_support_radius, hole_r);
        auto deficit = [&](double r, Complex* out) { eval.deficit_at_distance(r, out); };
        std::vector<Complex> value = radial_integral(deficit, order, r_lo, opts);
        const double scale = 2.0 * std::numbers::pi * field.intensity;
        for (Complex& v : value) v *= scale;
        return UTToeplitzRow(std::move(value));
    }

    // Anisotropic case: fixed angular panels around the centroid, adaptive
    // radial lines, with the hole clipped per ray.
    Point2 centroid{0.0, 0.0};
    for (const auto& t : field.terms) {
        centroid.x += t.point.x;
        centroid.y += t.point.y;
    }
    centroid.x /= static_cast<double>(field.terms.size());
    centroid.y /= static_cast<double>(field.terms.size());

    auto ray_value = [&](double theta, Complex* out) {
        const double cs = std::cos(theta), sn = std::sin(theta);
        auto deficit = [&](double r, Complex* o) {
            const Point2 x{centroid.x + r * cs, centroid.y + r * sn};
            eval.deficit_at_point(x, o);
        };
        double clip_lo = 0.0, clip_hi = 0.0;
        if (field.hole) {
            const double dx = field.hole->center.x - centroid.x;
            const double dy = field.hole->center.y - centroid.y;
            const double b = cs * dx + sn * dy;
            const double disc = b * b - (dx * dx + dy * dy -
                                         field.hole->radius * field.hole->radius);
            if (disc > 0.0) {
                clip_lo = std::max(0.0, b - std::sqrt(disc));
                clip_hi = std::max(0.0, b + std::sqrt(disc));
            }
        }
        std::vector<Complex> acc(order, 0.0);
        if (clip_hi > clip_lo && clip_lo > 0.0) {
            std::vector<Complex> head =
                radial_integral_finite(deficit, order, 0.0, clip_lo, opts);
            for (int j = 0; j < order; ++j) acc[j] += head[j];
        }
        std::vector<Complex> tail = radial_integral(deficit, order, clip_hi, opts);
        for (int j = 0; j < order; ++j) out[j] = acc[j] + tail[j];
    };

    std::vector<Complex> total(order, 0.0);
    std::vector<Complex> panel_value(order);
    std::vector<double> panel_error(order);
    const double step = 2.0 * std::numbers::pi / kAngularPanels;
    for (int k = 0; k < kAngularPanels; ++k) {
        quad::gk15(ray_value, order, k * step, (k + 1) * step, panel_value.data(),
                   panel_error.data());
        for (int j = 0; j < order; ++j) total[j] += panel_value[j];
    }
    for (Complex& v : total) v *= field.intensity;
    return UTToeplitzRow(std::move(total));
}

UTToeplitzRow shot_noise_mlt_bidiag(const FieldSpec& field, Complex s0, Complex s1,
                                    int order, const QuadratureConfig& q) {
    try {
        const UTToeplitzRow integral = campbell_integral_bidiag(field, s0, s1, order, q);
        return matfun::expm_ut_toeplitz(-integral);
    } catch (const DivergentIntegralError&) {
        if (s0.real() > 0.0)
            return UTToeplitzRow(std::vector<Complex>(order, 0.0));
        throw UnsupportedError(
            "divergent Campbell integral with Re(eigenvalue) = 0 has no defined value");
    }
}

} // namespace detail

UTToeplitzRow field_matrix_lt(const ShotNoiseScenario& sc, const JordanBlockSpec& s_block,
                              const Point2& x) {
    if (s_block.eigenvalue.real() < 0.0)
        throw NonconvergentTransformError(
            "matrix Laplace transform requires Re(eigenvalue) >= 0");
    return detail::field_row(detail::make_field(sc), s_block.eigenvalue, 1.0,
                             s_block.size, x);
}

UTToeplitzRow campbell_matrix_integral(const ShotNoiseScenario& sc,
                                       const JordanBlockSpec& s_block,
                                       const QuadratureConfig& q) {
    return detail::campbell_integral_bidiag(detail::make_field(sc), s_block.eigenvalue,
                                            1.0, s_block.size, q);
}

UTToeplitzRow shot_noise_matrix_lt(const ShotNoiseScenario& sc,
                                   const JordanBlockSpec& s_block,
                                   const QuadratureConfig& q) {
    return detail::shot_noise_mlt_bidiag(detail::make_field(sc), s_block.eigenvalue, 1.0,
                                         s_block.size, q);
}

UTToeplitzRow shot_noise_matrix_lt_scaled_erlang(const ShotNoiseScenario& sc, double rate,
                                                 int order, const QuadratureConfig& q) {
    if (!(rate > 0.0)) throw ArgumentError("Erlang generator rate must be positive");
    return detail::shot_noise_mlt_bidiag(detail::make_field(sc), rate, -rate, order, q);
}

UTToeplitzRow campbell_integral_scaled_erlang(const ShotNoiseScenario& sc, double rate,
                                              int order, const QuadratureConfig& q) {
    if (!(rate > 0.0)) throw ArgumentError("Erlang generator rate must be positive");
    return detail::campbell_integral_bidiag(detail::make_field(sc), rate, -rate, order, q);
}

FinitenessReport finiteness_check(const ShotNoiseScenario& sc,
                                  const std::vector<double>& s_grid,
                                  const QuadratureConfig& q) {
    if (s_grid.empty()) throw ArgumentError("finiteness_check needs a nonempty s grid");
    q.validate();
    const detail::FieldSpec field = detail::make_field(sc);
    FinitenessReport report;
    report.finite = true;
    for (double s : s_grid) {
        if (!(s > 0.0)) throw ArgumentError("finiteness_check grid must be positive");
        report.per_s.push_back(detail::scalar_tail_diagnostic(field, s, q));
        report.finite = report.finite && report.per_s.back().converged;
    }
    return report;
}

} // namespace mlt::campbell
