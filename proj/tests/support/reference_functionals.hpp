#pragma once

// Test-only reference evaluation of the boundedness functionals: direct
// formula transcription over fixed dense grids (support/reference.hpp),
// decoupled from the library's adaptive quadrature, density caching and
// scale factoring. Inputs are plain callables. One-dimensional cumulatives
// are tabulated once on a dense log grid so nested sups stay affordable.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "support/reference.hpp"

namespace ref {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

inline double nan_() { return std::numeric_limits<double>::quiet_NaN(); }
inline double inf_() { return std::numeric_limits<double>::infinity(); }

// product with the measure-theoretic convention 0 * inf = 0
inline double prodz(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }
inline double prodz(double a, double b, double c) { return prodz(prodz(a, b), c); }

// dense tabulated cumulative of a nonnegative function on [lo, hi]
struct Cum {
    std::vector<double> ts, pre;

    explicit Cum(const Fn1& f, int n = 20000, double lo = 1e-9, double hi = 1e9) {
        ts.resize(n + 1);
        pre.resize(n + 1, 0.0);
        for (int i = 0; i <= n; ++i) ts[i] = lo * std::pow(hi / lo, double(i) / n);
        for (int i = 0; i < n; ++i) {
            const double a = ts[i], b = ts[i + 1], m = std::sqrt(a * b);
            // Simpson in log coordinates per cell
            const double h = std::log(b / a);
            pre[i + 1] = pre[i] + (f(a) * a + 4.0 * f(m) * m + f(b) * b) * h / 6.0;
        }
    }
    double prefix(double t) const {
        if (t <= ts.front()) return 0.0;
        if (t >= ts.back()) return pre.back();
        const auto it = std::upper_bound(ts.begin(), ts.end(), t);
        const std::size_t i = it - ts.begin() - 1;
        const double f = std::log(t / ts[i]) / std::log(ts[i + 1] / ts[i]);
        return pre[i] + f * (pre[i + 1] - pre[i]);
    }
    double tail(double t) const { return pre.back() - prefix(t); }
};

struct Params {
    double p;
    double q;
    double r() const { return p * q / (p - q); }
    double pp() const { return p / (p - 1.0); }
    double qp() const { return q / (q - 1.0); }
};

struct Sizes {
    int outer = 2000;
    int inner = 1200;
    int sup = 1201;
    int cum = 20000;
};

// dual-orientation pair for 0 < q < 1 < p
inline std::pair<double, double> A12_dual(const Fn1& w, const Fn1& v, const Fn2& U, Params e,
                                          Sizes sz = {}) {
    const double r = e.r(), p = e.p, q = e.q, pp = e.pp();
    auto dv = [&](double z) { return std::pow(v(z), 1.0 - pp); };
    const Cum wc(w, sz.cum);
    const Cum dvc(dv, sz.cum);
    auto a1_int = [&](double t) {
        const double wt = w(t);
        if (wt <= 0) return 0.0;
        const double iv = integrate([&](double z) { return std::pow(U(t, z), pp) * dv(z); }, t,
                                    inf_(), sz.inner);
        return std::pow(wc.prefix(t), r / p) * wt * std::pow(iv, r / pp);
    };
    auto a2_int = [&](double t) {
        const double wt = w(t);
        if (wt <= 0) return 0.0;
        const double Wu = integrate([&](double x) { return w(x) * std::pow(U(x, t), q); }, 0, t, sz.inner);
        const double sup = supremum(
            [&](double z) { return std::pow(U(t, z), q) * std::pow(dvc.tail(z), r / pp); }, t,
            inf_(), sz.sup);
        return std::pow(Wu, r / p) * wt * sup;
    };
    return {integrate(a1_int, 0, inf_(), sz.outer), integrate(a2_int, 0, inf_(), sz.outer)};
}

// primal (starred) pair
inline std::pair<double, double> A12_primal(const Fn1& w, const Fn1& v, const Fn2& U, Params e,
                                            Sizes sz = {}) {
    const double r = e.r(), p = e.p, q = e.q, pp = e.pp();
    auto dv = [&](double z) { return std::pow(v(z), 1.0 - pp); };
    const Cum wc(w, sz.cum);
    const Cum dvc(dv, sz.cum);
    auto a1_int = [&](double t) {
        const double wt = w(t);
        if (wt <= 0) return 0.0;
        const double iv = integrate([&](double z) { return std::pow(U(z, t), pp) * dv(z); }, 0, t, sz.inner);
        return std::pow(wc.tail(t), r / p) * wt * std::pow(iv, r / pp);
    };
    auto a2_int = [&](double t) {
        const double wt = w(t);
        if (wt <= 0) return 0.0;
        const double Twu =
            integrate([&](double x) { return w(x) * std::pow(U(t, x), q); }, t, inf_(), sz.inner);
        const double sup = supremum(
            [&](double z) { return std::pow(U(z, t), q) * std::pow(dvc.prefix(z), r / pp); }, 0, t,
            sz.sup);
        return std::pow(Twu, r / p) * wt * sup;
    };
    return {integrate(a1_int, 0, inf_(), sz.outer), integrate(a2_int, 0, inf_(), sz.outer)};
}

// p = 1 dual pair
inline std::pair<double, double> A34_dual(const Fn1& w, const Fn1& v, const Fn2& U, Params e,
                                          Sizes sz = {}) {
    const double q = e.q, qp = e.qp();
    auto make = [&](bool kernel_q) {
        return integrate(
            [&](double t) {
                const double wt = w(t);
                if (wt <= 0) return 0.0;
                const double wm = kernel_q
                                      ? integrate([&](double x) { return w(x) * std::pow(U(x, t), q); },
                                                  0, t, sz.inner)
                                      : integrate(w, 0, t, sz.inner);
                const double kexp = kernel_q ? q : -qp;
                const double sup = supremum(
                    [&](double z) { return std::pow(U(t, z), kexp) * std::pow(v(z), qp); }, t,
                    inf_(), sz.sup);
                return std::pow(wm, -qp) * wt * sup;
            },
            0, inf_(), sz.outer);
    };
    return {make(false), make(true)};
}

// nonincreasing-cone conditions (u-multiplier operator)
inline std::array<double, 4> A5678(const Fn1& w, const Fn1& v, const Fn1& u, Params e,
                                   Sizes sz = {}) {
    const double r = e.r(), p = e.p, q = e.q;
    const Cum uc(u, sz.cum);
    const Cum vc(v, sz.cum);
    const Cum wc(w, sz.cum);
    auto Uu = [&](double x, double y) { return uc.prefix(y) - uc.prefix(x); };
    std::array<double, 4> out{nan_(), nan_(), nan_(), nan_()};

    if (p <= 1.0) {
        out[0] = std::pow(
            integrate(
                [&](double t) {
                    const double wt = w(t);
                    if (wt <= 0) return 0.0;
                    const double sup = supremum(
                        [&](double z) {
                            return prodz(std::pow(Uu(t, z), r), std::pow(vc.prefix(z), -r / p));
                        },
                        t, inf_(), sz.sup);
                    return prodz(std::pow(wc.prefix(t), r / p), wt, sup);
                },
                0, inf_(), sz.outer),
            1.0 / r);
    }
    out[1] = std::pow(
        integrate(
            [&](double t) {
                const double wt = w(t);
                if (wt <= 0) return 0.0;
                const double Wu = integrate(
                    [&](double x) { return w(x) * std::pow(Uu(x, t), q); }, 0, t, sz.inner);
                const double sup = supremum(
                    [&](double z) {
                        return prodz(std::pow(Uu(t, z), q), std::pow(vc.prefix(z), -r / p));
                    },
                    t, inf_(), sz.sup);
                return prodz(std::pow(Wu, r / p), wt, sup);
            },
            0, inf_(), sz.outer),
        1.0 / r);
    if (p > 1.0) {
        const double pp = e.pp();
        out[2] = std::pow(
            integrate(
                [&](double t) {
                    const double wt = w(t);
                    if (wt <= 0) return 0.0;
                    const double iv = integrate(
                        [&](double z) {
                            return prodz(std::pow(Uu(t, z), pp), std::pow(vc.prefix(z), -pp), v(z));
                        },
                        t, inf_(), sz.inner);
                    return prodz(std::pow(wc.prefix(t), r / p), wt, std::pow(iv, r / pp));
                },
                0, inf_(), sz.outer),
            1.0 / r);
        const double vmass = vc.pre.back();
        out[3] = std::pow(
                     integrate([&](double t) { return w(t) * std::pow(Uu(0, t), q); }, 0, inf_(),
                               sz.inner),
                     1.0 / q) *
                 std::pow(vmass, -1.0 / p);
    }
    return out;
}

}  // namespace ref
