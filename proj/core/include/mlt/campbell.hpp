// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "mlt/distributions.hpp"
#include "mlt/quadrature.hpp"

namespace mlt::campbell {

using dist::FadingModel;
using matfun::Complex;
using matfun::JordanBlockSpec;
using matfun::UTToeplitzRow;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point2& a, const Point2& b);

/// Distance-dependent path loss. Both variants decrease monotonically and
/// satisfy the alpha > 2 integrability requirement for planar fields.
class PathLoss {
public:
    /// l(r) = k r^{-alpha}; contributions inside the exclusion radius are
    /// dropped from field integrals.
    static PathLoss power_law(double k, double alpha, double exclusion_radius = 0.0);
    /// l(r) = k (1 + r^alpha)^{-1}, bounded at the origin.
    static PathLoss bounded_power_law(double k, double alpha);

    /// The bare attenuation law (may be +inf at r = 0 for the power law).
    double gain(double r) const;
    /// Attenuation as seen by field integrals: zero inside the power-law
    /// exclusion radius, gain(r) elsewhere.
    double field_gain(double r) const;
    /// Closed-form inverse of gain on (0, gain(0^+)).
    double inverse(double g) const;

    double alpha() const;
    double scale() const;
    double exclusion_radius() const;
    bool is_power_law() const { return std::holds_alternative<PowerLawModel>(law_); }
    /// True when gain blows up at the origin and nothing excludes it.
    bool singular_at_origin() const;

    struct PowerLawModel { double k, alpha, exclusion; };
    struct BoundedModel { double k, alpha; };

private:
    using Law = std::variant<PowerLawModel, BoundedModel>;
    explicit PathLoss(Law law) : law_(std::move(law)) {}
    Law law_;
};

struct CombinationTerm {
    double weight = 1.0;
    Point2 point;
};

struct Hole {
    Point2 center;
    double radius = 0.0;
};

/// Homogeneous planar PPP shot-noise field: intensity, attenuation, i.i.d.
/// fading marks, and a weighted combination of sample points. An optional
/// circular hole is excised from the domain.
struct ShotNoiseScenario {
    double intensity = 1.0;
    PathLoss path_loss;
    FadingModel fading;
    std::vector<CombinationTerm> combination = {{1.0, {0.0, 0.0}}};
    std::optional<Hole> exclusion;

    ShotNoiseScenario(double intensity_pp, PathLoss pl, FadingModel fade);
    ShotNoiseScenario(double intensity_pp, PathLoss pl, FadingModel fade,
                      std::vector<CombinationTerm> terms,
                      std::optional<Hole> hole = std::nullopt);
};

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;
    double tail_truncation_tol = 1e-12;

    void validate() const;
};

struct FinitenessDiagnostic {
    double s = 0.0;
    bool converged = false;
    double truncation_radius = 0.0;
    double tail_magnitude = 0.0;
};

struct FinitenessReport {
    bool finite = false;
    std::vector<FinitenessDiagnostic> per_s;
};

namespace detail {

/// Geometry-erased field used by the integration cores. Tests may supply
/// arbitrary gain callables here (e.g. a constant-gain stress field).
struct FieldSpec {
    double intensity = 1.0;
    dist::FadingModel fading = dist::FadingModel::exponential(1.0);
    std::function<double(double)> field_gain;
    std::vector<CombinationTerm> terms = {{1.0, {0.0, 0.0}}};
    std::optional<Hole> hole;
    /// field_gain is identically zero below this radius (integration hint).
    double inner_support_radius = 0.0;
};

FieldSpec make_field(const ShotNoiseScenario& sc);

/// First row of the per-point matrix Laplace transform product
/// prod_i L_H(c_i B; x - y_i), where B is the upper-bidiagonal Toeplitz
/// matrix with diagonal s0 and superdiagonal s1 and c_i = w_i field_gain(d_i).
UTToeplitzRow field_row(const FieldSpec& field, Complex s0, Complex s1, int order,
                        const Point2& x);

/// First row of the Campbell matrix integral
/// int (e1 - prod_i L_H(c_i(x) B)) Lambda(dx) over the hole-punctured plane.
UTToeplitzRow campbell_integral_bidiag(const FieldSpec& field, Complex s0, Complex s1,
                                       int order, const QuadratureConfig& q);

/// exp(-campbell_integral_bidiag(...)) as a Toeplitz first row; the zero
/// matrix row when the scalar integral diverges with Re(s0) > 0.
UTToeplitzRow shot_noise_mlt_bidiag(const FieldSpec& field, Complex s0, Complex s1,
                                    int order, const QuadratureConfig& q);

/// Numeric verification that int E[H~(x)^order] Lambda(dx) converges.
bool moment_condition_ok(const FieldSpec& field, int order, const QuadratureConfig& q);

FinitenessDiagnostic scalar_tail_diagnostic(const FieldSpec& field, double s,
                                            const QuadratureConfig& q);

} // namespace detail

/// First row of prod_i L_H(alpha_i l(|x - y_i|) J; x - y_i) at the point x.
UTToeplitzRow field_matrix_lt(const ShotNoiseScenario& sc, const JordanBlockSpec& s_block,
                              const Point2& x);

/// First row of int (I - L_H~(J; x)) Lambda(dx), reduced to a radial integral
/// for isotropic scenarios and angular panels times adaptive radial lines
/// otherwise. Per-entry estimated quadrature error meets the config bounds.
UTToeplitzRow campbell_matrix_integral(const ShotNoiseScenario& sc,
                                       const JordanBlockSpec& s_block,
                                       const QuadratureConfig& q = {});

/// Matrix Laplace transform of the shot noise at a Jordan block:
/// expm_ut_toeplitz of the negated Campbell integral. Returns the zero row
/// when the scalar integral diverges with Re(lambda) > 0.
UTToeplitzRow shot_noise_matrix_lt(const ShotNoiseScenario& sc,
                                   const JordanBlockSpec& s_block,
                                   const QuadratureConfig& q = {});

/// Matrix Laplace transform of the shot noise at rate * Q^(order), the scaled
/// negated Erlang sub-generator (diagonal rate, superdiagonal -rate).
UTToeplitzRow shot_noise_matrix_lt_scaled_erlang(const ShotNoiseScenario& sc, double rate,
                                                 int order,
                                                 const QuadratureConfig& q = {});

/// Campbell integral row at the scaled Erlang generator argument (the
/// sub-generator matrix behind CCDF smoothing).
UTToeplitzRow campbell_integral_scaled_erlang(const ShotNoiseScenario& sc, double rate,
                                              int order, const QuadratureConfig& q = {});

/// Numeric counterpart of the finiteness dichotomy: true iff the scalar
/// integral int (1 - L_H~(s; x)) Lambda(dx) converges for every s in s_grid
/// (the tail integrand decays below tail_truncation_tol before the truncation
/// radius cap).
FinitenessReport finiteness_check(const ShotNoiseScenario& sc,
                                  const std::vector<double>& s_grid,
                                  const QuadratureConfig& q = {});

} // namespace mlt::campbell
