// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "mlt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mlt::quad {

namespace {

// 15-point Kronrod abscissae on [0, 1] side (symmetric) and weights, with the
// embedded 7-point Gauss weights. Values from the QUADPACK QK15 rule.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0000000000000000};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct PanelEval {
    std::vector<Complex> value;
    std::vector<double> error;
};

void eval_panel(const VectorIntegrand& f, int dim, double a, double b, PanelEval& out,
                std::vector<Complex>& fa, std::vector<Complex>& fb,
                std::vector<Complex>& kacc, std::vector<Complex>& gacc) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    kacc.assign(dim, 0.0);
    gacc.assign(dim, 0.0);
    fa.resize(dim);
    fb.resize(dim);

    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        f(mid - dx, fa.data());
        f(mid + dx, fb.data());
        for (int c = 0; c < dim; ++c) {
            const Complex s = fa[c] + fb[c];
            kacc[c] += kWgk[i] * s;
            if (i % 2 == 1) gacc[c] += kWg[i / 2] * s;
        }
    }
    f(mid, fa.data());
    for (int c = 0; c < dim; ++c) {
        kacc[c] += kWgk[7] * fa[c];
        gacc[c] += kWg[3] * fa[c];
    }

    out.value.resize(dim);
    out.error.resize(dim);
    for (int c = 0; c < dim; ++c) {
        out.value[c] = half * kacc[c];
        out.error[c] = std::abs(half * (kacc[c] - gacc[c]));
    }
}

struct Leaf {
    double a, b;
    std::vector<Complex> value;
    std::vector<double> error;
    double priority = 0.0; // worst error-to-tolerance ratio over components
};

} // namespace

void gk15(const VectorIntegrand& f, int dim, double a, double b,
          Complex* value, double* error) {
    PanelEval eval;
    std::vector<Complex> fa, fb, kacc, gacc;
    eval_panel(f, dim, a, b, eval, fa, fb, kacc, gacc);
    std::copy(eval.value.begin(), eval.value.end(), value);
    std::copy(eval.error.begin(), eval.error.end(), error);
}

IntegralResult integrate_adaptive(const VectorIntegrand& f, int dim, double a, double b,
                                  const AdaptiveOptions& opts, double divergence_edge) {
    if (!(b > a)) throw ArgumentError("integrate_adaptive: empty interval");
    if (dim < 1) throw ArgumentError("integrate_adaptive: dim must be >= 1");

    std::vector<Complex> fa, fb, kacc, gacc;
    PanelEval eval;

    auto make_leaf = [&](double lo, double hi) {
        eval_panel(f, dim, lo, hi, eval, fa, fb, kacc, gacc);
        Leaf leaf{lo, hi, eval.value, eval.error, 0.0};
        for (int c = 0; c < dim; ++c)
            if (!std::isfinite(leaf.error[c]) || !std::isfinite(leaf.value[c].real()) ||
                !std::isfinite(leaf.value[c].imag()))
                leaf.priority = std::numeric_limits<double>::infinity();
        return leaf;
    };

    // Worst-panel-first refinement against a global per-component budget.
    std::vector<Leaf> leaves;
    std::vector<Complex> total(dim, 0.0);
    std::vector<double> err_sum(dim, 0.0), tol(dim);

    auto set_priority = [&](Leaf& leaf) {
        leaf.priority = 0.0;
        for (int c = 0; c < dim; ++c) {
            if (!std::isfinite(leaf.error[c]) || !std::isfinite(leaf.value[c].real()) ||
                !std::isfinite(leaf.value[c].imag())) {
                leaf.priority = std::numeric_limits<double>::infinity();
                return;
            }
            leaf.priority = std::max(leaf.priority, leaf.error[c] / tol[c]);
        }
    };

    leaves.push_back(make_leaf(a, b));
    for (int c = 0; c < dim; ++c) {
        total[c] = leaves[0].value[c];
        err_sum[c] = leaves[0].error[c];
        tol[c] = std::max(opts.abs_tol, opts.rel_tol * std::abs(total[c]));
    }
    set_priority(leaves[0]);
    int panels_used = 1;

    while (true) {
        bool converged = true;
        for (int c = 0; c < dim; ++c)
            if (!(err_sum[c] <= tol[c])) converged = false;
        if (converged) break;

        std::size_t worst_leaf = 0;
        for (std::size_t i = 1; i < leaves.size(); ++i)
            if (leaves[i].priority > leaves[worst_leaf].priority) worst_leaf = i;

        if (panels_used + 2 > opts.max_panels) {
            const Leaf& leaf = leaves[worst_leaf];
            int worst_component = 0;
            double worst_err = -1.0;
            for (int c = 0; c < dim; ++c)
                if (err_sum[c] > tol[c] && leaf.error[c] > worst_err) {
                    worst_err = leaf.error[c];
                    worst_component = c;
                }
            const bool at_edge =
                divergence_edge >= 0.0 &&
                (std::min(std::abs(leaf.a - divergence_edge),
                          std::abs(leaf.b - divergence_edge)) <= 1e-6 * (b - a));
            if (at_edge)
                throw DivergentIntegralError("integrand tail not integrable to tolerance",
                                             worst_component);
            throw QuadratureError("adaptive quadrature panel budget exhausted");
        }

        const Leaf leaf = leaves[worst_leaf];
        const double mid = 0.5 * (leaf.a + leaf.b);
        if (!(mid > leaf.a && mid < leaf.b))
            throw QuadratureError("adaptive quadrature interval collapsed");
        Leaf left = make_leaf(leaf.a, mid);
        Leaf right = make_leaf(mid, leaf.b);
        for (int c = 0; c < dim; ++c) {
            total[c] += left.value[c] + right.value[c] - leaf.value[c];
            err_sum[c] += left.error[c] + right.error[c] - leaf.error[c];
            tol[c] = std::max(opts.abs_tol, opts.rel_tol * std::abs(total[c]));
        }
        set_priority(left);
        set_priority(right);
        leaves[worst_leaf] = std::move(left);
        leaves.push_back(std::move(right));
        panels_used += 2;
    }

    // Deterministic left-to-right accumulation independent of refinement order.
    std::sort(leaves.begin(), leaves.end(),
              [](const Leaf& x, const Leaf& y) { return x.a < y.a; });
    IntegralResult result;
    result.value.assign(dim, 0.0);
    result.error_estimate.assign(dim, 0.0);
    result.panels.reserve(leaves.size());
    for (const Leaf& leaf : leaves) {
        for (int c = 0; c < dim; ++c) {
            result.value[c] += leaf.value[c];
            result.error_estimate[c] += leaf.error[c];
        }
        result.panels.push_back({leaf.a, leaf.b});
    }
    return result;
}

std::vector<Complex> integrate_panels(const VectorIntegrand& f, int dim,
                                      const std::vector<Panel>& panels) {
    std::vector<Complex> acc(dim, 0.0);
    PanelEval eval;
    std::vector<Complex> fa, fb, kacc, gacc;
    for (const Panel& p : panels) {
        eval_panel(f, dim, p.a, p.b, eval, fa, fb, kacc, gacc);
        for (int c = 0; c < dim; ++c) acc[c] += eval.value[c];
    }
    return acc;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw ArgumentError("gauss_legendre: n must be >= 1");
    nodes.resize(n);
    weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

} // namespace mlt::quad
