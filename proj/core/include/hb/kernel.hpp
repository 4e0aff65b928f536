#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hb/util.hpp"
#include "hb/weight.hpp"

namespace hb {

enum class KernelFamily {
    constant,          ///< U(x,y) = 1
    riemann_liouville, ///< U(x,y) = (y-x)^alpha
    logarithmic,       ///< U(x,y) = log^alpha(y/x), x > 0
    integral_of,       ///< U(x,y) = int_x^y u
    sup_of,            ///< U(x,y) = esssup_{(x,y)} u
    custom_tabulated,  ///< log-bilinear interpolation of tabulated nodes
};

std::string to_string(KernelFamily f);
KernelFamily kernel_family_from_string(const std::string& s);

struct RegularityReport {
    bool monotone_ok = true;
    bool subadditive_ok = true;  ///< with the declared theta
    bool positive_ok = true;     ///< U(0,y) > 0 on samples
    double worst_violation = 0.0;  ///< largest relative violation, 0 when clean
    bool ok() const { return monotone_ok && subadditive_ok && positive_ok; }
};

/// A two-variable kernel U(x,y) >= 0 on 0 <= x <= y <= inf, nonincreasing in
/// x, nondecreasing in y, with a declared quasi-triangle constant theta:
/// U(x,z) <= theta (U(x,y) + U(y,z)). Immutable after construction; all
/// operations are pure and safe to call concurrently.
class Kernel {
public:
    static Kernel constant();
    static Kernel riemann_liouville(double alpha);
    static Kernel logarithmic(double alpha);
    static Kernel integral_of(WeightSpec u);
    static Kernel sup_of(WeightSpec u);
    /// Tabulated on xs x ys (row-major values[i*ys.size()+j] = U(xs[i], ys[j])).
    /// Must pass check_regularity before being used downstream.
    static Kernel tabulated(std::vector<double> xs, std::vector<double> ys,
                            std::vector<double> values, double theta);

    Kernel with_theta(double theta) const;

    /// U(x,y). Pre: 0 <= x <= y (y may be +inf). The logarithmic family
    /// requires x > 0 (its value at x = 0 is +inf and integrals against it
    /// must start at a positive cutoff).
    double eval(double x, double y) const;

    /// Lower-bound estimate of the minimal admissible theta: the max of
    /// U(x,z)/(U(x,y)+U(y,z)) over sampled triples x < y < z (midpoint
    /// triples are always included; zero denominators are skipped).
    /// Deterministic given the seed.
    double estimate_theta(double dom_lo, double dom_hi, int samples, std::uint64_t seed) const;

    /// Sampled check of nonnegativity/monotonicity, the quasi-triangle
    /// inequality with the declared theta, and positivity of U(0, y).
    RegularityReport check_regularity(double dom_lo, double dom_hi, int samples,
                                      std::uint64_t seed) const;

    KernelFamily family() const { return family_; }
    double alpha() const { return alpha_; }
    double theta() const { return theta_; }
    const WeightSpec& u() const;

    /// Kernel for the t -> 1/t change of variables: U~(x,y) = U(1/y, 1/x).
    Kernel reflected() const;

private:
    Kernel() = default;
    KernelFamily family_ = KernelFamily::constant;
    double alpha_ = 0.0;
    double theta_ = 1.0;
    std::shared_ptr<const WeightSpec> u_;           // integral_of / sup_of
    std::shared_ptr<const struct KernelTable> tab_; // custom_tabulated
    bool reflected_ = false;
    double eval_raw(double x, double y) const;
};

}  // namespace hb
