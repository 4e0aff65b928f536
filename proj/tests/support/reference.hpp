#pragma once

// Test-only reference numerics: fixed dense composite Simpson in log
// coordinates and dense-grid suprema. Deliberately independent of the
// library's adaptive engine so it can serve as an oracle for it.

#include <cmath>
#include <functional>
#include <limits>

namespace ref {

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int panels = 20000, double clip_lo = 1e-9, double clip_hi = 1e9) {
    const double lo = (a <= 0.0) ? clip_lo : a;
    const double hi = std::isinf(b) ? clip_hi : b;
    if (!(hi > lo)) return 0.0;
    const double sa = std::log(lo), sb = std::log(hi);
    auto F = [&](double s) {
        const double t = std::exp(s);
        return f(t) * t;
    };
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double s0 = sa + (sb - sa) * i / panels;
        const double s1 = sa + (sb - sa) * (i + 1) / panels;
        acc += (F(s0) + 4.0 * F(0.5 * (s0 + s1)) + F(s1)) * (s1 - s0) / 6.0;
    }
    return acc;
}

inline double supremum(const std::function<double(double)>& g, double a, double b,
                       int samples = 20001, double clip_lo = 1e-9, double clip_hi = 1e9) {
    const double lo = (a <= 0.0) ? clip_lo : a;
    const double hi = std::isinf(b) ? clip_hi : b;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double t = lo * std::pow(hi / lo, double(i) / (samples - 1));
        const double v = g(t);
        if (v > best) best = v;
    }
    return best;
}

}  // namespace ref
