#pragma once

#include <functional>
#include <string>

#include "hb/util.hpp"

namespace hb::quad {

/// Shared numeric configuration for integration and supremum estimation on
/// (0, inf). `trunc_lo`/`trunc_hi` bound improper endpoints before the log
/// substitution; explicit finite endpoints are honored as given.
struct QuadConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_depth = 40;
    double trunc_lo = 1e-9;
    double trunc_hi = 1e9;
    int sup_grid = 2048;

    /// Configuration for nested (inner) integrals and sups: tolerance is
    /// tightened 10x so the nested error stays below the reported estimate,
    /// and the sup grid is reduced since it runs once per outer node.
    QuadConfig inner() const {
        QuadConfig c = *this;
        c.rel_tol /= 10.0;
        c.abs_tol /= 10.0;
        c.sup_grid = std::max(256, sup_grid / 4);
        return c;
    }
    void validate() const;
};

struct QuadResult {
    double value = 0.0;          ///< may be +inf
    double err_estimate = 0.0;
    bool converged = false;
    std::string divergence_reason;  ///< empty when no divergence was detected
    double argmax = kNaN;           ///< filled by sup_on

    bool finite() const { return std::isfinite(value); }
};

using Fn = std::function<double(double)>;

/// Adaptive integration of a nonnegative f over (a, b), 0 <= a < b <= inf.
/// Improper endpoints are handled by the substitution t = e^s; the domain is
/// split into octave blocks which are summed in increasing-t order (the
/// documented deterministic summation order). A result of +inf with a
/// divergence reason is returned when the octave blocks toward an improper
/// endpoint fail to decay geometrically over 8 consecutive blocks.
/// Refinement decisions are purely relative, so integrate(c*f) = c*integrate(f)
/// up to floating-point rounding.
QuadResult integrate(const Fn& f, double a, double b, const QuadConfig& cfg);

/// Supremum of a nonnegative piecewise-continuous g over [a, b]: max over a
/// log-spaced grid of cfg.sup_grid points, refined around the argmax by a
/// symmetric ternary section (symmetric so that mirrored inputs give mirrored
/// results exactly). Returns the value and the argmax location. If g is still
/// rising at an improper endpoint the sup is reported as +inf.
QuadResult sup_on(const Fn& g, double a, double b, const QuadConfig& cfg);

}  // namespace hb::quad
