#include "hb/quad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hb::quad {

void QuadConfig::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0)) throw std::invalid_argument("quad tolerances must be positive");
    if (!(trunc_lo > 0) || !(trunc_lo < trunc_hi)) throw std::invalid_argument("quad: trunc_lo must be in (0, trunc_hi)");
    if (max_depth < 1 || sup_grid < 8) throw std::invalid_argument("quad: max_depth/sup_grid too small");
}

namespace {

struct Infinite {};  // integrand hit +inf: the integral is +inf

// Integrand in log coordinates: F(s) = f(e^s) e^s.
double flog(const Fn& f, double s) {
    const double t = std::exp(s);
    const double v = f(t);
    if (std::isnan(v)) throw std::domain_error("integrate: integrand is NaN at t=" + fmt17(t));
    if (std::isinf(v)) throw Infinite{};
    return v * t;
}

double simpson(double fa, double fm, double fb, double h) {
    return (fa + 4.0 * fm + fb) * h / 6.0;
}

// Standard adaptive Simpson recursion with a purely relative acceptance test
// against `scale` (an estimate of the total integral magnitude).
double adapt(const Fn& f, double a, double b, double fa, double fm, double fb, double whole,
             double scale, double rel, int depth, int max_depth, double& err_acc) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = flog(f, lm), frm = flog(f, rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (depth >= max_depth || std::abs(delta) <= 15.0 * rel * std::max(scale, std::abs(left + right))) {
        err_acc += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adapt(f, a, m, fa, flm, fm, left, scale, rel * 0.5, depth + 1, max_depth, err_acc) +
           adapt(f, m, b, fm, frm, fb, right, scale, rel * 0.5, depth + 1, max_depth, err_acc);
}

double block(const Fn& f, double s0, double s1, double scale, double rel, int max_depth, double& err_acc) {
    const double fa = flog(f, s0);
    const double fm = flog(f, 0.5 * (s0 + s1));
    const double fb = flog(f, s1);
    const double whole = simpson(fa, fm, fb, s1 - s0);
    return adapt(f, s0, s1, fa, fm, fb, whole, scale, rel, 0, max_depth, err_acc);
}

// Coarse per-block estimate (two-panel Simpson) used to size the relative
// scale and to run the divergence test before full refinement.
double coarse(const Fn& f, double s0, double s1) {
    const double m = 0.5 * (s0 + s1);
    const double q1 = 0.25 * (3 * s0 + s1), q3 = 0.25 * (s0 + 3 * s1);
    return simpson(flog(f, s0), flog(f, q1), flog(f, m), m - s0) +
           simpson(flog(f, m), flog(f, q3), flog(f, s1), s1 - m);
}

// Blocks I[j] are ordered toward an improper endpoint. Divergence is declared
// when 8 consecutive outermost blocks fail to decay geometrically; otherwise a
// geometric extrapolation of the unreached tail is returned (exact for pure
// power behavior, since octave masses of a power are exactly geometric).
bool tail_diverges(const std::vector<double>& outward, double& tail_est, double& tail_err) {
    tail_est = 0.0;
    tail_err = 0.0;
    const int m = 8;
    const int n = static_cast<int>(outward.size());
    if (n == 0) return false;
    const double last = outward.back();
    if (last <= 0.0) return false;
    if (n < m) {
        // too few octaves to see the asymptotic regime: no verdict, charge
        // the outermost block as truncation slack
        tail_err = last;
        return false;
    }
    bool non_decaying = true;
    for (int j = n - m; j + 1 < n; ++j) {
        if (outward[j + 1] < 0.999 * outward[j]) { non_decaying = false; break; }
    }
    if (non_decaying) return true;
    double rho_max = 0.0, rho_min = kInf;
    for (int j = n - 4; j < n; ++j) {
        if (outward[j - 1] > 0.0 && outward[j] > 0.0) {
            const double rho = outward[j] / outward[j - 1];
            rho_max = std::max(rho_max, rho);
            rho_min = std::min(rho_min, rho);
        }
    }
    if (!std::isfinite(rho_min) || rho_max == 0.0) return false;  // tail underflowed
    if (rho_max >= 0.999) {
        // not yet geometric at the window edge: no extrapolation, only slack
        tail_err = last;
        return false;
    }
    tail_est = last * rho_max / (1.0 - rho_max);
    // drift of the octave ratio bounds the extrapolation uncertainty
    tail_err = tail_est - last * rho_min / (1.0 - rho_min) + 1e-3 * tail_est;
    return false;
}

}  // namespace

QuadResult integrate(const Fn& f, double a, double b, const QuadConfig& cfg) {
    cfg.validate();
    if (!(a >= 0) || !(b > a)) {
        if (a == b) return {0.0, 0.0, true, "", kNaN};
        throw std::invalid_argument("integrate: bad interval");
    }
    const bool improper_lo = (a <= 0.0);
    const bool improper_hi = std::isinf(b);
    const double lo = improper_lo ? cfg.trunc_lo : a;
    const double hi = improper_hi ? cfg.trunc_hi : b;
    if (!(lo < hi)) return {0.0, 0.0, true, "", kNaN};

    const double s_lo = std::log(lo), s_hi = std::log(hi);
    const double ln2 = std::log(2.0);
    const int nblocks = std::max(1, static_cast<int>(std::ceil((s_hi - s_lo) / ln2)));
    std::vector<double> edges(nblocks + 1);
    for (int j = 0; j <= nblocks; ++j)
        edges[j] = s_lo + (s_hi - s_lo) * j / nblocks;

    QuadResult out;
    try {
        std::vector<double> est(nblocks);
        double total_est = 0.0;
        for (int j = 0; j < nblocks; ++j) {
            est[j] = coarse(f, edges[j], edges[j + 1]);
            total_est += est[j];
        }

        // early divergence verdicts from the coarse pass
        double te = 0.0, terr = 0.0;
        if (improper_hi && tail_diverges(est, te, terr)) {
            out.value = kInf;
            out.divergence_reason = "octave blocks toward +inf do not decay geometrically";
            return out;
        }
        {
            std::vector<double> rev(est.rbegin(), est.rend());
            if (improper_lo && tail_diverges(rev, te, terr)) {
                out.value = kInf;
                out.divergence_reason = "octave blocks toward 0 do not decay geometrically";
                return out;
            }
        }

        // refine blocks; summation in increasing-t order, then the tail
        // extrapolations beyond the truncation window. Only a handful of
        // octaves carry weight comparable to the total ("scale"), so an
        // error budget of rel/16 per block keeps the sum within rel.
        double err = 0.0, total = 0.0;
        const double scale = std::max(total_est, 0.0);
        const double rel_block = cfg.rel_tol / std::min(nblocks, 16);
        std::vector<double> refined(nblocks);
        for (int j = 0; j < nblocks; ++j) {
            refined[j] = block(f, edges[j], edges[j + 1], scale, rel_block, cfg.max_depth, err);
            total += refined[j];
        }
        double tail_add = 0.0, tail_err = 0.0;
        if (improper_hi) {
            if (tail_diverges(refined, te, terr)) {
                out.value = kInf;
                out.divergence_reason = "octave blocks toward +inf do not decay geometrically";
                return out;
            }
            tail_add += te;
            tail_err += terr;
        }
        if (improper_lo) {
            std::vector<double> rev(refined.rbegin(), refined.rend());
            if (tail_diverges(rev, te, terr)) {
                out.value = kInf;
                out.divergence_reason = "octave blocks toward 0 do not decay geometrically";
                return out;
            }
            tail_add += te;
            tail_err += terr;
        }
        out.value = total + tail_add;
        out.err_estimate = err + tail_err;
        out.converged = out.err_estimate <= std::max(cfg.rel_tol * std::abs(out.value), cfg.abs_tol);
        return out;
    } catch (const Infinite&) {
        out.value = kInf;
        out.divergence_reason = "integrand infinite at an interior node";
        return out;
    }
}

QuadResult sup_on(const Fn& g, double a, double b, const QuadConfig& cfg) {
    cfg.validate();
    if (!(a >= 0) || !(b >= a)) throw std::invalid_argument("sup_on: bad interval");
    const bool improper_lo = (a <= 0.0);
    const bool improper_hi = std::isinf(b);
    const double lo = improper_lo ? cfg.trunc_lo : a;
    const double hi = improper_hi ? cfg.trunc_hi : std::max(b, lo);
    QuadResult out;
    if (hi <= lo) {
        const double v = g(lo);
        out.value = std::isnan(v) ? 0.0 : v;
        out.argmax = lo;
        out.converged = true;
        return out;
    }

    const int n = cfg.sup_grid;
    const double s_lo = std::log(lo), s_hi = std::log(hi);
    std::vector<double> vals(n);
    int best = -1;
    double best_v = -kInf;
    for (int i = 0; i < n; ++i) {
        const double t = std::exp(s_lo + (s_hi - s_lo) * i / (n - 1));
        double v = g(t);
        if (std::isnan(v)) v = -kInf;  // isolated undefined points are skipped
        vals[i] = v;
        if (std::isinf(v) && v > 0) {
            out.value = kInf;
            out.argmax = t;
            out.divergence_reason = "sup: +inf sample";
            return out;
        }
        if (v > best_v) { best_v = v; best = i; }
    }
    if (best < 0) { out.value = 0.0; out.converged = true; return out; }

    // rising into an improper endpoint: walk outward beyond the truncation
    // window; a peak just outside gives a finite sup, sustained growth over
    // many octaves is the +inf verdict
    auto rising = [&](bool at_hi) {
        const int m = 8;
        if (n < m + 1) return false;
        for (int j = 0; j < m; ++j) {
            const int i = at_hi ? n - 1 - j : j;
            const int i2 = at_hi ? i - 1 : i + 1;
            if (!(vals[i] > vals[i2]) || vals[i] <= 0) return false;
        }
        return true;
    };
    auto walk_out = [&](bool at_hi) -> bool {  // true when the sup is +inf
        double z = at_hi ? hi : lo;
        double prev = vals[at_hi ? n - 1 : 0];
        int falling = 0;
        for (int step = 0; step < 60; ++step) {
            z = at_hi ? z * 2.0 : z * 0.5;
            double v = g(z);
            if (std::isnan(v)) v = -kInf;
            if (std::isinf(v) && v > 0) { out.argmax = z; return true; }
            if (v > best_v) {
                best_v = v;
                out.argmax = z;
            }
            falling = (v < prev) ? falling + 1 : 0;
            if (falling >= 8) return false;  // turned over: finite sup
            prev = v;
        }
        return true;  // still rising after 60 octaves
    };
    if (improper_hi && best == n - 1 && rising(true)) {
        if (walk_out(true)) {
            out.value = kInf;
            out.divergence_reason = "sup still rising at the +inf truncation edge";
            return out;
        }
        out.value = best_v;
        out.converged = true;
        return out;
    }
    if (improper_lo && best == 0 && rising(false)) {
        if (walk_out(false)) {
            out.value = kInf;
            out.divergence_reason = "sup still rising at the 0 truncation edge";
            return out;
        }
        out.value = best_v;
        out.converged = true;
        return out;
    }

    // ternary-section refinement in log coordinates around the argmax cell
    double sl = s_lo + (s_hi - s_lo) * std::max(0, best - 1) / (n - 1);
    double sr = s_lo + (s_hi - s_lo) * std::min(n - 1, best + 1) / (n - 1);
    double vmax = best_v, smax = s_lo + (s_hi - s_lo) * best / (n - 1);
    for (int it = 0; it < 80 && sr - sl > 1e-14; ++it) {
        const double m1 = sl + (sr - sl) / 3.0;
        const double m2 = sr - (sr - sl) / 3.0;
        double v1 = g(std::exp(m1));
        double v2 = g(std::exp(m2));
        if (std::isnan(v1)) v1 = -kInf;
        if (std::isnan(v2)) v2 = -kInf;
        if (v1 > vmax) { vmax = v1; smax = m1; }
        if (v2 > vmax) { vmax = v2; smax = m2; }
        if (v1 < v2) sl = m1; else sr = m2;
    }
    out.value = std::max(vmax, 0.0);
    out.argmax = std::exp(smax);
    out.converged = true;
    return out;
}

}  // namespace hb::quad
