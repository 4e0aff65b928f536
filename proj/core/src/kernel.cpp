#include "hb/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hb {

std::string to_string(KernelFamily f) {
    switch (f) {
        case KernelFamily::constant: return "constant";
        case KernelFamily::riemann_liouville: return "riemann_liouville";
        case KernelFamily::logarithmic: return "logarithmic";
        case KernelFamily::integral_of: return "integral_of";
        case KernelFamily::sup_of: return "sup_of";
        case KernelFamily::custom_tabulated: return "custom_tabulated";
    }
    return "?";
}

KernelFamily kernel_family_from_string(const std::string& s) {
    if (s == "constant") return KernelFamily::constant;
    if (s == "riemann_liouville") return KernelFamily::riemann_liouville;
    if (s == "logarithmic") return KernelFamily::logarithmic;
    if (s == "integral_of") return KernelFamily::integral_of;
    if (s == "sup_of") return KernelFamily::sup_of;
    if (s == "custom_tabulated") return KernelFamily::custom_tabulated;
    throw std::invalid_argument("unknown kernel family: '" + s + "'");
}

struct KernelTable {
    std::vector<double> xs, ys, vals;  // vals[i*ys.size()+j] = U(xs[i], ys[j])

    double at(std::size_t i, std::size_t j) const { return vals[i * ys.size() + j]; }

    // bilinear in (log x, log y), constant extension outside the node box
    double eval(double x, double y) const {
        const auto locate = [](const std::vector<double>& g, double v, double& frac) {
            if (v <= g.front()) { frac = 0.0; return std::size_t{0}; }
            if (v >= g.back()) { frac = 1.0; return g.size() - 2; }
            const auto it = std::upper_bound(g.begin(), g.end(), v);
            const std::size_t i = it - g.begin() - 1;
            frac = std::log(v / g[i]) / std::log(g[i + 1] / g[i]);
            return i;
        };
        double fx = 0.0, fy = 0.0;
        const std::size_t i = locate(xs, x, fx);
        const std::size_t j = locate(ys, y, fy);
        const double v00 = at(i, j), v01 = at(i, j + 1), v10 = at(i + 1, j), v11 = at(i + 1, j + 1);
        return (1 - fx) * ((1 - fy) * v00 + fy * v01) + fx * ((1 - fy) * v10 + fy * v11);
    }
};

Kernel Kernel::constant() {
    Kernel k;
    k.family_ = KernelFamily::constant;
    k.theta_ = 1.0;
    return k;
}

Kernel Kernel::riemann_liouville(double alpha) {
    if (!(alpha > 0)) throw std::invalid_argument("riemann_liouville: alpha must be positive");
    Kernel k;
    k.family_ = KernelFamily::riemann_liouville;
    k.alpha_ = alpha;
    k.theta_ = std::max(1.0, std::pow(2.0, alpha - 1.0));
    return k;
}

Kernel Kernel::logarithmic(double alpha) {
    if (!(alpha > 0)) throw std::invalid_argument("logarithmic: alpha must be positive");
    Kernel k;
    k.family_ = KernelFamily::logarithmic;
    k.alpha_ = alpha;
    k.theta_ = std::max(1.0, std::pow(2.0, alpha - 1.0));
    return k;
}

Kernel Kernel::integral_of(WeightSpec u) {
    Kernel k;
    k.family_ = KernelFamily::integral_of;
    k.theta_ = 1.0;  // exactly additive
    k.u_ = std::make_shared<const WeightSpec>(std::move(u));
    return k;
}

Kernel Kernel::sup_of(WeightSpec u) {
    Kernel k;
    k.family_ = KernelFamily::sup_of;
    k.theta_ = 1.0;  // sup over (x,z) = max of the two partial sups
    k.u_ = std::make_shared<const WeightSpec>(std::move(u));
    return k;
}

Kernel Kernel::tabulated(std::vector<double> xs, std::vector<double> ys,
                         std::vector<double> values, double theta) {
    if (xs.size() < 2 || ys.size() < 2 || values.size() != xs.size() * ys.size())
        throw std::invalid_argument("tabulated kernel: need >=2x2 nodes and matching values");
    if (!std::is_sorted(xs.begin(), xs.end()) || !std::is_sorted(ys.begin(), ys.end()) ||
        xs.front() <= 0 || ys.front() <= 0)
        throw std::invalid_argument("tabulated kernel: nodes must be positive increasing");
    Kernel k;
    k.family_ = KernelFamily::custom_tabulated;
    k.theta_ = theta;
    k.tab_ = std::make_shared<const KernelTable>(KernelTable{std::move(xs), std::move(ys), std::move(values)});
    return k;
}

Kernel Kernel::with_theta(double theta) const {
    if (!(theta > 0)) throw std::invalid_argument("theta must be positive");
    Kernel k = *this;
    k.theta_ = theta;
    return k;
}

const WeightSpec& Kernel::u() const {
    if (!u_) throw std::logic_error("kernel has no underlying u weight");
    return *u_;
}

double Kernel::eval_raw(double x, double y) const {
    switch (family_) {
        case KernelFamily::constant:
            return 1.0;
        case KernelFamily::riemann_liouville:
            if (std::isinf(y)) return kInf;
            return std::pow(y - x, alpha_);
        case KernelFamily::logarithmic:
            if (x == 0.0)
                throw std::domain_error("logarithmic kernel: U(0,y) is +inf; start integrals at a positive cutoff");
            if (std::isinf(y)) return kInf;
            if (y == x) return 0.0;
            return std::pow(std::log(y / x), alpha_);
        case KernelFamily::integral_of:
            return std::isinf(y) ? u_->tail(x) : u_->integral(x, y);
        case KernelFamily::sup_of: {
            if (y == x) return 0.0;
            // per-piece sup over (x,y): endpoints of single-power pieces are
            // exact, other pieces are scanned on a fixed grid
            double best = 0.0;
            for (const auto& p : u_->fn().pieces()) {
                const double lo = std::max(x, p.lo);
                const double hi = std::min(y, p.hi);
                if (!(hi > lo)) continue;
                const double hi_c = std::isinf(hi) ? std::max(lo * 2, 1e12) : hi;
                if (p.single_power()) {
                    best = std::max(best, std::max(p.eval(std::max(lo, 1e-300)), p.eval(hi_c)));
                } else {
                    for (int i = 0; i <= 32; ++i)
                        best = std::max(best, p.eval(lo * std::pow(hi_c / lo, i / 32.0)));
                }
            }
            return u_->scale() * best;
        }
        case KernelFamily::custom_tabulated:
            return tab_->eval(x, std::isinf(y) ? tab_->ys.back() : y);
    }
    return 0.0;
}

double Kernel::eval(double x, double y) const {
    if (x > y && x <= y * (1.0 + 1e-12)) x = y;  // grid round-off near the diagonal
    if (!(x >= 0) || !(y >= x)) throw std::invalid_argument("kernel eval: need 0 <= x <= y");
    if (reflected_) {
        // U~(x,y) = U(1/y, 1/x); 1/inf = 0 is only legal for families defined at 0
        const double rx = std::isinf(y) ? 0.0 : 1.0 / y;
        const double ry = (x == 0.0) ? kInf : 1.0 / x;
        return eval_raw(rx, ry);
    }
    return eval_raw(x, y);
}

Kernel Kernel::reflected() const {
    Kernel k = *this;
    k.reflected_ = !reflected_;
    return k;
}

double Kernel::estimate_theta(double dom_lo, double dom_hi, int samples, std::uint64_t seed) const {
    if (samples < 3) throw std::invalid_argument("estimate_theta: need samples >= 3");
    if (!(dom_lo > 0) || !(dom_hi > dom_lo)) throw std::invalid_argument("estimate_theta: bad domain");
    Rng rng(seed);
    double best = 0.0;
    auto consider = [&](double x, double y, double z) {
        const double num = eval(x, z);
        const double den = eval(x, y) + eval(y, z);
        if (den > 0 && std::isfinite(num)) best = std::max(best, num / den);
    };
    for (int i = 0; i < samples; ++i) {
        double a = rng.log_uniform(dom_lo, dom_hi);
        double b = rng.log_uniform(dom_lo, dom_hi);
        double c = rng.log_uniform(dom_lo, dom_hi);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        if (a < b && b < c) consider(a, b, c);
        // midpoint triple: the arithmetic midpoint maximizes the ratio for the
        // smooth builtin families
        if (a < c) consider(a, 0.5 * (a + c), c);
    }
    return best;
}

RegularityReport Kernel::check_regularity(double dom_lo, double dom_hi, int samples,
                                          std::uint64_t seed) const {
    if (!(dom_lo > 0) || !(dom_hi > dom_lo)) throw std::invalid_argument("check_regularity: bad domain");
    RegularityReport rep;
    Rng rng(seed);
    const int n = std::max(samples, 8);
    auto flag = [&rep](bool& ok, double violation) {
        if (violation > 1e-9) {
            ok = false;
            rep.worst_violation = std::max(rep.worst_violation, violation);
        }
    };
    for (int i = 0; i < n; ++i) {
        double a = rng.log_uniform(dom_lo, dom_hi);
        double b = rng.log_uniform(dom_lo, dom_hi);
        double c = rng.log_uniform(dom_lo, dom_hi);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        if (!(a < b && b < c)) continue;
        const double uab = eval(a, b), uac = eval(a, c), ubc = eval(b, c);
        const double scale = std::max({uab, uac, ubc, 1e-300});
        if (uab < 0 || uac < 0 || ubc < 0) flag(rep.monotone_ok, 1.0);
        // nonincreasing in x / nondecreasing in y
        flag(rep.monotone_ok, (ubc - uac) / scale);   // U(b,c) <= U(a,c)
        flag(rep.monotone_ok, (uab - uac) / scale);   // U(a,b) <= U(a,c)
        // quasi-triangle inequality with the declared theta
        if (std::isfinite(uac)) flag(rep.subadditive_ok, (uac - theta_ * (uab + ubc)) / scale);
    }
    // positivity of U(0,y); analytic for families with a singular or exact 0 column
    const bool analytic_positive = family_ == KernelFamily::riemann_liouville ||
                                   family_ == KernelFamily::logarithmic;
    if (!analytic_positive) {
        for (int i = 0; i < 8; ++i) {
            const double y = rng.log_uniform(dom_lo, dom_hi);
            const double x0 = (family_ == KernelFamily::custom_tabulated) ? dom_lo * 1e-6 : 0.0;
            if (!(eval(x0, y) > 0)) {
                rep.positive_ok = false;
                rep.worst_violation = std::max(rep.worst_violation, 1.0);
            }
        }
    }
    return rep;
}

}  // namespace hb
