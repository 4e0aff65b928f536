#include "hb/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace hb {

namespace {

using quad::QuadConfig;
using quad::QuadResult;

// rescale a quadrature result by an analytic homogeneity factor
QuadResult scaled(QuadResult r, double factor) {
    r.value = prod0(factor, r.value);
    r.err_estimate *= factor;
    return r;
}

double wv_factor(const ProblemSpec& s, double w_deg, double v_deg) {
    return powi(s.w.scale(), w_deg) * powi(s.v.scale(), v_deg);
}

struct Ctx {
    const ProblemSpec& spec;
    QuadConfig cfg;
    QuadConfig icfg;   // nested tolerance
    WeightSpec w0, v0; // unit-scale copies; scales re-enter analytically
    Ctx(const ProblemSpec& s, const QuadConfig& c)
        : spec(s), cfg(c), icfg(c.inner()), w0(s.w.with_unit_scale()), v0(s.v.with_unit_scale()) {}
    double U(double x, double y) const { return spec.U.eval(x, y); }
};

}  // namespace

std::pair<QuadResult, QuadResult> eval_A12(const ProblemSpec& spec, const QuadConfig& cfg) {
    const auto& e = spec.exps;
    if (!e.main_regime())
        throw std::invalid_argument("A1/A2 require 0 < q < 1 < p (got p=" + fmt17(e.p) +
                                    ", q=" + fmt17(e.q) + ")");
    Ctx c(spec, cfg);
    const double r = e.r(), p = e.p, q = e.q, pp = e.p_prime();
    const Density dv(c.v0, 1.0 - pp);
    const bool dual = spec.direction == Direction::dual_Hstar;

    auto inner_kernel_v = [&](double t) {
        // int over the far side of t of U^{p'} against the dual density
        auto f = dual ? quad::Fn([&](double z) { return prod0(powi(c.U(t, z), pp), dv.eval_base(z)); })
                      : quad::Fn([&](double z) { return prod0(powi(c.U(z, t), pp), dv.eval_base(z)); });
        return dual ? quad::integrate(f, t, kInf, c.icfg) : quad::integrate(f, 0.0, t, c.icfg);
    };
    auto a1_integrand = [&](double t) {
        const double wt = c.w0.eval(t);
        if (wt == 0.0) return 0.0;
        const double wmass = dual ? c.w0.prefix(t) : c.w0.tail(t);
        if (wmass == 0.0) return 0.0;
        const double iv = inner_kernel_v(t).value;
        return prod0(powi(wmass, r / p), wt, powi(iv, r / pp));
    };
    QuadResult a1 = quad::integrate(a1_integrand, 0.0, kInf, c.cfg);

    auto inner_kernel_w = [&](double t) {
        auto f = dual ? quad::Fn([&](double x) { return prod0(c.w0.eval(x), powi(c.U(x, t), q)); })
                      : quad::Fn([&](double x) { return prod0(c.w0.eval(x), powi(c.U(t, x), q)); });
        return dual ? quad::integrate(f, 0.0, t, c.icfg) : quad::integrate(f, t, kInf, c.icfg);
    };
    auto a2_integrand = [&](double t) {
        const double wt = c.w0.eval(t);
        if (wt == 0.0) return 0.0;
        const double wu = inner_kernel_w(t).value;
        if (wu == 0.0) return 0.0;
        auto g = dual ? quad::Fn([&](double z) {
                     return prod0(powi(c.U(t, z), q), powi(dv.tail_base(z), r / pp));
                 })
                      : quad::Fn([&](double z) {
                     return prod0(powi(c.U(z, t), q), powi(dv.prefix_base(z), r / pp));
                 });
        const QuadResult sup = dual ? quad::sup_on(g, t, kInf, c.icfg) : quad::sup_on(g, 0.0, t, c.icfg);
        return prod0(powi(wu, r / p), wt, sup.value);
    };
    QuadResult a2 = quad::integrate(a2_integrand, 0.0, kInf, c.cfg);

    const double factor = wv_factor(spec, r / q, -r / p);
    return {scaled(a1, factor), scaled(a2, factor)};
}

std::pair<QuadResult, QuadResult> eval_A34(const ProblemSpec& spec, const QuadConfig& cfg) {
    const auto& e = spec.exps;
    if (!e.p1_regime())
        throw std::invalid_argument("A3/A4 require p = 1 and 0 < q < 1 (got p=" + fmt17(e.p) +
                                    ", q=" + fmt17(e.q) + ")");
    Ctx c(spec, cfg);
    const double q = e.q, qp = e.q_prime();  // qp < 0
    const Density vq(c.v0, qp);
    const bool dual = spec.direction == Direction::dual_Hstar;

    auto make = [&](bool kernel_in_sup_is_q) {
        auto integrand = [&, kernel_in_sup_is_q](double t) {
            const double wt = c.w0.eval(t);
            if (wt == 0.0) return 0.0;
            double wmass;
            if (kernel_in_sup_is_q) {
                auto f = dual ? quad::Fn([&](double x) { return prod0(c.w0.eval(x), powi(c.U(x, t), q)); })
                              : quad::Fn([&](double x) { return prod0(c.w0.eval(x), powi(c.U(t, x), q)); });
                wmass = (dual ? quad::integrate(f, 0.0, t, c.icfg) : quad::integrate(f, t, kInf, c.icfg)).value;
            } else {
                wmass = dual ? c.w0.prefix(t) : c.w0.tail(t);
            }
            if (wmass == 0.0) return 0.0;
            const double kexp = kernel_in_sup_is_q ? q : -qp;
            auto g = dual ? quad::Fn([&](double z) {
                         return prod0(powi(c.U(t, z), kexp), vq.eval_base(z));
                     })
                          : quad::Fn([&](double z) {
                         return prod0(powi(c.U(z, t), kexp), vq.eval_base(z));
                     });
            const QuadResult sup = dual ? quad::sup_on(g, t, kInf, c.icfg) : quad::sup_on(g, 0.0, t, c.icfg);
            return prod0(powi(wmass, -qp), wt, sup.value);
        };
        return quad::integrate(integrand, 0.0, kInf, c.cfg);
    };

    QuadResult a3 = make(false);
    QuadResult a4 = make(true);
    const double factor = wv_factor(spec, 1.0 - qp, qp);
    return {scaled(a3, factor), scaled(a4, factor)};
}

std::array<QuadResult, 4> eval_A5678(const ProblemSpec& spec, const QuadConfig& cfg) {
    const auto& e = spec.exps;
    if (spec.cone != Cone::nonincreasing)
        throw std::invalid_argument("A5..A8 require cone = nonincreasing");
    if (!(e.q < 1.0 && e.q < e.p))
        throw std::invalid_argument("A5..A8 require q < 1 and q < p (got p=" + fmt17(e.p) +
                                    ", q=" + fmt17(e.q) + ")");
    Ctx c(spec, cfg);
    const double r = e.r(), p = e.p, q = e.q;
    const WeightSpec& u = spec.U.u();
    auto Uu = [&](double x, double y) { return std::isinf(y) ? u.tail(x) : u.integral(x, y); };
    auto Vv = [&](double z) { return c.v0.prefix(z); };

    const double wfac = powi(spec.w.scale(), 1.0 / q);
    const double vfac = powi(spec.v.scale(), -1.0 / p);

    std::array<QuadResult, 4> out;
    auto na = [](const char* why) {
        QuadResult r0;
        r0.value = kNaN;
        r0.converged = false;
        r0.divergence_reason = why;
        return r0;
    };

    auto root = [&](QuadResult res, double expo) {
        const double inner = res.value;
        res.value = powi(inner, expo);
        if (inner > 0 && std::isfinite(inner))
            res.err_estimate *= expo * res.value / inner;
        return res;
    };

    // A5 (p <= 1): outer against W^{r/p} w, sup of (int u)^r V^{-r/p}
    if (e.p <= 1.0) {
        auto integrand = [&](double t) {
            const double wt = c.w0.eval(t);
            if (wt == 0.0) return 0.0;
            const double W = c.w0.prefix(t);
            auto g = [&](double z) { return prod0(powi(Uu(t, z), r), powi(Vv(z), -r / p)); };
            const QuadResult sup = quad::sup_on(g, t, kInf, c.icfg);
            return prod0(powi(W, r / p), wt, sup.value);
        };
        out[0] = scaled(root(quad::integrate(integrand, 0.0, kInf, c.cfg), 1.0 / r),
                        wfac * vfac);
    } else {
        out[0] = na("A5 applies only for p <= 1");
    }

    // A6 (all p in range)
    {
        auto integrand = [&](double t) {
            const double wt = c.w0.eval(t);
            if (wt == 0.0) return 0.0;
            auto fw = [&](double x) { return prod0(c.w0.eval(x), powi(Uu(x, t), q)); };
            const double Wu = quad::integrate(fw, 0.0, t, c.icfg).value;
            if (Wu == 0.0) return 0.0;
            auto g = [&](double z) { return prod0(powi(Uu(t, z), q), powi(Vv(z), -r / p)); };
            const QuadResult sup = quad::sup_on(g, t, kInf, c.icfg);
            return prod0(powi(Wu, r / p), wt, sup.value);
        };
        out[1] = scaled(root(quad::integrate(integrand, 0.0, kInf, c.cfg), 1.0 / r),
                        wfac * vfac);
    }

    // A7 (p > 1)
    if (e.p > 1.0) {
        const double pp = e.p_prime();
        auto integrand = [&](double t) {
            const double wt = c.w0.eval(t);
            if (wt == 0.0) return 0.0;
            const double W = c.w0.prefix(t);
            auto fv = [&](double z) {
                return prod0(powi(Uu(t, z), pp), powi(Vv(z), -pp), c.v0.eval(z));
            };
            const double iv = quad::integrate(fv, t, kInf, c.icfg).value;
            return prod0(powi(W, r / p), wt, powi(iv, r / pp));
        };
        out[2] = scaled(root(quad::integrate(integrand, 0.0, kInf, c.cfg), 1.0 / r),
                        wfac * vfac);
    } else {
        out[2] = na("A7 applies only for p > 1");
    }

    // A8 (p > 1): dichotomy on int v
    if (e.p > 1.0) {
        const double vmass = c.v0.total_mass();
        QuadResult a8;
        if (std::isinf(vmass)) {
            a8.value = 0.0;
            a8.converged = true;
            a8.divergence_reason = "";
        } else {
            auto f = [&](double t) { return prod0(c.w0.eval(t), powi(Uu(0.0, t), q)); };
            QuadResult norm = quad::integrate(f, 0.0, kInf, c.cfg);
            a8 = norm;
            a8.value = prod0(powi(norm.value, 1.0 / q), powi(vmass, -1.0 / p));
            a8.err_estimate = norm.err_estimate;
        }
        out[3] = scaled(a8, wfac * vfac);
    } else {
        out[3] = na("A8 applies only for p > 1");
    }
    return out;
}

quad::QuadResult eval_E(const ProblemSpec& spec, int which, const QuadConfig& cfg) {
    const auto& e = spec.exps;
    const double p = e.p, q = e.q;
    auto need = [&](bool ok, const char* window) {
        if (!ok)
            throw std::invalid_argument(std::string("E") + std::to_string(which) +
                                        " requires exponents with " + window + " (got p=" + fmt17(p) +
                                        ", q=" + fmt17(q) + ")");
    };
    switch (which) {
        case 1: case 2: need(p > 1.0 && p <= q, "1 < p <= q"); break;
        case 3: case 4: need(q > 1.0 && q < p, "1 < q < p"); break;
        case 5: need(q < 1.0 && p >= 1.0, "q < 1 <= p"); break;
        default: throw std::invalid_argument("eval_E: which must be 1..5");
    }
    Ctx c(spec, cfg);
    const double factor = wv_factor(spec, 1.0 / q, -1.0 / p);

    const double pp = e.p_prime();
    const Density dv(c.v0, p > 1.0 ? 1.0 - pp : -1.0);

    auto kernel_w_tail = [&](double t) {
        auto f = [&](double x) { return prod0(powi(c.U(t, x), q), c.w0.eval(x)); };
        return quad::integrate(f, t, kInf, c.icfg).value;
    };
    auto kernel_v_prefix = [&](double t) {
        auto f = [&](double x) { return prod0(powi(c.U(x, t), pp), dv.eval_base(x)); };
        return quad::integrate(f, 0.0, t, c.icfg).value;
    };

    QuadResult res;
    switch (which) {
        case 1: {
            auto g = [&](double t) {
                return prod0(powi(kernel_w_tail(t), 1.0 / q), powi(dv.prefix_base(t), 1.0 / pp));
            };
            res = quad::sup_on(g, 0.0, kInf, c.cfg);
            break;
        }
        case 2: {
            auto g = [&](double t) {
                return prod0(powi(c.w0.tail(t), 1.0 / q), powi(kernel_v_prefix(t), 1.0 / pp));
            };
            res = quad::sup_on(g, 0.0, kInf, c.cfg);
            break;
        }
        case 3: {
            const double qp = e.q_prime();
            auto f = [&](double t) {
                const double dvt = dv.eval_base(t);
                if (dvt == 0.0) return 0.0;
                return prod0(powi(kernel_w_tail(t), e.r() / q),
                             prod0(powi(dv.prefix_base(t), e.r() / qp), dvt));
            };
            res = quad::integrate(f, 0.0, kInf, c.cfg);
            res.value = powi(res.value, 1.0 / e.r());
            break;
        }
        case 4: {
            auto f = [&](double t) {
                const double wt = c.w0.eval(t);
                if (wt == 0.0) return 0.0;
                return prod0(powi(c.w0.tail(t), e.r() / p), wt,
                             powi(kernel_v_prefix(t), e.r() / pp));
            };
            res = quad::integrate(f, 0.0, kInf, c.cfg);
            res.value = powi(res.value, 1.0 / e.r());
            break;
        }
        case 5: {
            if (p > 1.0) {
                auto f = [&](double t) {
                    const double dvt = dv.eval_base(t);
                    if (dvt == 0.0) return 0.0;
                    return prod0(powi(kernel_w_tail(t), pp / q), dvt);
                };
                res = quad::integrate(f, 0.0, kInf, c.cfg);
                res.value = powi(res.value, 1.0 / pp);
            } else {
                // esssup limit of the dual-norm factor at p = 1
                auto g = [&](double t) {
                    return prod0(powi(kernel_w_tail(t), 1.0 / q), dv.eval_base(t));
                };
                res = quad::sup_on(g, 0.0, kInf, c.cfg);
            }
            break;
        }
    }
    return scaled(res, factor);
}

quad::QuadResult eval_functional(const ProblemSpec& spec, const std::string& name,
                                 const QuadConfig& cfg) {
    // functional names are absolute: A1..A4 are the plain (dual-orientation)
    // forms, A1*..A4* the starred (primal) forms, whatever spec.direction says
    auto with_dir = [&](Direction d) {
        ProblemSpec s = spec;
        s.direction = d;
        return s;
    };
    std::string n = name;
    if (n.size() == 3 && n[0] == 'A' && n[2] == '*') n = std::string("As") + n[1];

    if (n == "E1" || n == "E2" || n == "E3" || n == "E4" || n == "E5")
        return eval_E(spec, n[1] - '0', cfg);
    if (n == "A1") return eval_A12(with_dir(Direction::dual_Hstar), cfg).first;
    if (n == "A2") return eval_A12(with_dir(Direction::dual_Hstar), cfg).second;
    if (n == "A3") return eval_A34(with_dir(Direction::dual_Hstar), cfg).first;
    if (n == "A4") return eval_A34(with_dir(Direction::dual_Hstar), cfg).second;
    if (n == "A5") return eval_A5678(spec, cfg)[0];
    if (n == "A6") return eval_A5678(spec, cfg)[1];
    if (n == "A7") return eval_A5678(spec, cfg)[2];
    if (n == "A8") return eval_A5678(spec, cfg)[3];
    if (n == "As1") return eval_A12(with_dir(Direction::primal_H), cfg).first;
    if (n == "As2") return eval_A12(with_dir(Direction::primal_H), cfg).second;
    if (n == "As3") return eval_A34(with_dir(Direction::primal_H), cfg).first;
    if (n == "As4") return eval_A34(with_dir(Direction::primal_H), cfg).second;
    throw std::invalid_argument("unknown functional name: '" + name + "'");
}

FunctionalReport predict(const ProblemSpec& spec, const QuadConfig& cfg) {
    const auto& e = spec.exps;
    FunctionalReport rep;

    auto push = [&rep](const std::string& name, const QuadResult& r) {
        rep.items.push_back({name, r.value, r.err_estimate, std::isfinite(r.value), r.divergence_reason});
    };

    if (spec.cone == Cone::nonincreasing) {
        auto a = eval_A5678(spec, cfg);
        double sum = 0.0;
        if (e.p <= 1.0) {
            rep.regime = "nonincreasing cone, p <= 1";
            push("A5", a[0]);
            push("A6", a[1]);
            sum = a[0].value + a[1].value;
        } else {
            rep.regime = "nonincreasing cone, p > 1";
            push("A6", a[1]);
            push("A7", a[2]);
            push("A8", a[3]);
            sum = a[1].value + a[2].value + a[3].value;
        }
        rep.predicted_constant = sum;
        rep.bounded = std::isfinite(sum);
        return rep;
    }

    if (e.p < 1.0)
        throw std::invalid_argument(
            "p < 1 with the all-nonnegative cone rejected: for nontrivial U, v, w the operator "
            "is never bounded (test functions in L^p(v) need not be locally integrable)");

    const bool dual = spec.direction == Direction::dual_Hstar;
    if (e.main_regime()) {
        auto [a1, a2] = eval_A12(spec, cfg);
        push(dual ? "A1" : "A1*", a1);
        push(dual ? "A2" : "A2*", a2);
        rep.regime = dual ? "0<q<1<p, dual (t->inf operator)" : "0<q<1<p, primal (0->t operator)";
        const double sum = a1.value + a2.value;
        rep.predicted_constant = powi(sum, 1.0 / e.r());
        rep.bounded = std::isfinite(sum);
        return rep;
    }
    if (e.p1_regime()) {
        auto [a3, a4] = eval_A34(spec, cfg);
        push(dual ? "A3" : "A3*", a3);
        push(dual ? "A4" : "A4*", a4);
        rep.regime = dual ? "p=1, 0<q<1, dual" : "p=1, 0<q<1, primal";
        const double sum = a3.value + a4.value;
        rep.predicted_constant = powi(sum, -1.0 / e.q_prime());
        rep.bounded = std::isfinite(sum);
        return rep;
    }
    throw std::invalid_argument(
        "predict covers 0<q<1<=p and the nonincreasing-cone cases; use the E conditions for "
        "other exponent windows (got p=" + fmt17(e.p) + ", q=" + fmt17(e.q) + ")");
}

std::string to_string(Direction d) { return d == Direction::primal_H ? "primal_H" : "dual_Hstar"; }
std::string to_string(Cone c) { return c == Cone::all_nonneg ? "all_nonneg" : "nonincreasing"; }
Direction direction_from_string(const std::string& s) {
    if (s == "primal_H") return Direction::primal_H;
    if (s == "dual_Hstar") return Direction::dual_Hstar;
    throw std::invalid_argument("unknown direction: '" + s + "'");
}
Cone cone_from_string(const std::string& s) {
    if (s == "all_nonneg") return Cone::all_nonneg;
    if (s == "nonincreasing") return Cone::nonincreasing;
    throw std::invalid_argument("unknown cone: '" + s + "'");
}

}  // namespace hb
