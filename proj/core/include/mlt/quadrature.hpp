// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "mlt/errors.hpp"

namespace mlt::quad {

using Complex = std::complex<double>;

/// Evaluates all components of a vector-valued integrand at one abscissa.
using VectorIntegrand = std::function<void(double x, Complex* out)>;

struct Panel {
    double a;
    double b;
};

struct IntegralResult {
    std::vector<Complex> value;
    std::vector<double> error_estimate; // per component
    std::vector<Panel> panels;          // leaves in left-to-right order
};

struct AdaptiveOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_panels = 2000;
};

/// One 15-point Gauss-Kronrod rule over [a, b]. Writes the Kronrod value and
/// the |K15 - G7| error estimate per component.
void gk15(const VectorIntegrand& f, int dim, double a, double b,
          Complex* value, double* error);

/// Adaptive bisection with GK15 panels. A panel is accepted once every
/// component meets max(abs_tol, rel_tol * |whole-interval estimate|) scaled by
/// its length fraction. Accepted panels accumulate in left-to-right order, so
/// results are independent of evaluation schedule. Throws QuadratureError
/// (or DivergentIntegralError when the failure hugs an interval endpoint that
/// maps to infinity; see divergence_edge) once the panel budget is exhausted.
IntegralResult integrate_adaptive(const VectorIntegrand& f, int dim, double a, double b,
                                  const AdaptiveOptions& opts,
                                  // when >= 0: edge abscissa whose neighborhood
                                  // indicates a divergent tail (e.g. u = 0 under
                                  // the u = 1/(1+r) map)
                                  double divergence_edge = -1.0);

/// Non-adaptive replay: integrates f over an explicit panel list with the
/// same rule and accumulation order as integrate_adaptive. Integrating the
/// components of a vector integrand one at a time over the same panels
/// reproduces the assembled result bit for bit.
std::vector<Complex> integrate_panels(const VectorIntegrand& f, int dim,
                                      const std::vector<Panel>& panels);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace mlt::quad
