#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hb/quad.hpp"
#include "hb/util.hpp"

namespace hb {

/// One summand of a piece: coeff * t^expo, optionally damped by exp(-rate*t)
/// (kind=decay) or exp(-rate/t) (kind=inv). The three kinds are closed as a
/// family under the t -> 1/t substitution with a power Jacobian, which keeps
/// reflection an exact involution.
struct Term {
    enum class Exp { none, decay, inv };
    double coeff = 1.0;
    double expo = 0.0;
    double rate = 0.0;
    Exp kind = Exp::none;

    double eval(double t) const;
    Term reflected(double jac_expo) const;
    bool prefix_finite() const;  ///< integrable at 0
    bool tail_finite() const;    ///< integrable at +inf
};

/// Value on [lo, hi) is the sum of `terms`; `infinite` marks an identically
/// +inf piece (these arise in dual densities over zero pieces of a weight).
struct Piece {
    double lo = 0.0;
    double hi = kInf;
    std::vector<Term> terms;
    bool infinite = false;

    double eval(double t) const;
    bool single_power() const { return !infinite && terms.size() == 1; }
};

/// Nonnegative piecewise-analytic function on (0, inf) with per-piece closed
/// forms for integration where available (pure power terms) and deterministic
/// Gauss panels otherwise. Immutable; safe for concurrent use.
class PiecewiseFn {
public:
    explicit PiecewiseFn(std::vector<Piece> pieces);

    double eval(double t) const;
    double prefix(double t) const;  ///< int_0^t, may be +inf
    double tail(double t) const;    ///< int_t^inf, may be +inf
    double total() const { return tail(0.0); }
    double piece_integral(double a, double b) const;  ///< int_a^b, a <= b

    const std::vector<Piece>& pieces() const { return pieces_; }

    /// g(s) = s^jac_expo * f(1/s); exact piecewise image.
    PiecewiseFn reflected(double jac_expo) const;

    /// Pointwise power f^s when every piece is a single term (else nullopt).
    std::optional<PiecewiseFn> powed(double s) const;

private:
    std::vector<Piece> pieces_;
    std::vector<double> cum_;  // prefix mass at each piece boundary, may hit +inf
    const Piece& piece_at(double t) const;
};

/// A weight: 0 < int_0^t w < inf for every t > 0. Carries a separate scalar
/// `scale` so that w -> lambda*w scalings stay analytically exact; evaluators
/// factor the scale out of quadrature and reapply it with the functional's
/// known homogeneity degree.
class WeightSpec {
public:
    explicit WeightSpec(std::vector<Piece> pieces, double scale = 1.0);

    static WeightSpec constant(double c = 1.0);
    static WeightSpec power(double coeff, double expo);  ///< coeff * t^expo on (0, inf)

    double eval(double t) const { return scale_ * fn_.eval(t); }
    double prefix(double t) const { return scale_ * fn_.prefix(t); }  ///< W(t)
    double tail(double t) const;   ///< int_t^inf, +inf when divergent
    double total_mass() const { return tail(0.0); }
    double integral(double a, double b) const { return scale_ * fn_.piece_integral(a, b); }

    double scale() const { return scale_; }
    WeightSpec scaled(double lambda) const;
    WeightSpec with_unit_scale() const;

    /// Leftmost t with prefix(t) = target (flat stretches of W resolve to the
    /// left edge). Pre: 0 < target <= total mass.
    double level_point(double target) const;

    /// w restricted to (0, m): pieces clipped, zero afterwards.
    WeightSpec truncated(double m) const;

    /// Reflections under t -> 1/t. A w-role weight maps to s^{-2} w(1/s); a
    /// v-role weight (the L^p side) maps to s^{2(p-1)} v(1/s), which is the
    /// Jacobian that preserves both int f^p v and the dual-density measure
    /// v^{1-p'}(z) dz. Both are involutions.
    WeightSpec reflected_w() const;
    WeightSpec reflected_v(double p) const;

    const PiecewiseFn& fn() const { return fn_; }

private:
    PiecewiseFn fn_;
    double scale_ = 1.0;
};

/// Pointwise power v^expo of a weight, with integration support. Closed-form
/// piecewise image when v has single-term pieces; otherwise evaluation is
/// exact pointwise and prefix/tail integrals run through a cached cumulative
/// grid with asymptotic end corrections. Where v = 0 and expo < 0 the density
/// is +inf and any integral across it is +inf.
class Density {
public:
    Density(const WeightSpec& v, double expo);

    double eval(double t) const;
    double prefix(double t) const;
    double tail(double t) const;

    bool closed_form() const { return closed_.has_value(); }
    double scale() const { return scale_; }  ///< v.scale()^expo, factored out

    /// Unscaled variants used by evaluators that factor homogeneity degrees.
    double prefix_base(double t) const;
    double tail_base(double t) const;
    double eval_base(double t) const;
    /// int_a^b of the unscaled density (window form, safe when the prefix to
    /// either side is infinite).
    double integral_base(double a, double b) const;

private:
    double expo_;
    double scale_;
    std::optional<PiecewiseFn> closed_;
    std::shared_ptr<const PiecewiseFn> base_;
    // numeric fallback state
    std::shared_ptr<const class DensityCache> cache_;
};

/// dual_density(v, p): for p > 1 the evaluable density v^{1-p'}; for p = 1 a
/// marker selecting the esssup form together with 1/v.
struct DualDensity {
    bool esssup_mode = false;
    Density density;
};
DualDensity dual_density(const WeightSpec& v, double p);

/// Exponent pair (p, q) with the derived quantities used throughout.
struct Exponents {
    double p = 2.0;
    double q = 0.5;

    void validate() const;
    double r() const;        ///< pq/(p-q); for p=1 equals -q' = q/(1-q)
    double p_prime() const;  ///< p/(p-1), +inf when p = 1
    double q_prime() const;  ///< q/(q-1), negative when q < 1
    double theta_cap(double theta) const { return 2.0 * std::pow(theta, q); }

    bool main_regime() const { return q < 1.0 && q > 0.0 && p > 1.0; }  ///< 0<q<1<p
    bool p1_regime() const { return q < 1.0 && q > 0.0 && p == 1.0; }   ///< p=1, 0<q<1
};

}  // namespace hb
