#include "hb/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hb {

namespace {
using quad::QuadConfig;
using quad::QuadResult;
}

CoveringSequence CoveringSequence::make(std::vector<double> pts) {
    CoveringSequence s{std::move(pts)};
    s.validate();
    return s;
}

void CoveringSequence::validate() const {
    if (points.size() < 3) throw std::invalid_argument("covering sequence: need at least 3 points");
    if (points.front() != 0.0) throw std::invalid_argument("covering sequence: first point must be 0");
    if (!std::isinf(points.back())) throw std::invalid_argument("covering sequence: last point must be inf");
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (!(points[i] < points[i + 1]))
            throw std::invalid_argument("covering sequence: points must be strictly increasing");
}

std::string to_string(DCondition d) {
    switch (d) {
        case DCondition::D1: return "D1";
        case DCondition::D2: return "D2";
        case DCondition::D3: return "D3";
        case DCondition::D4: return "D4";
        case DCondition::LaiD1: return "LaiD1";
        case DCondition::LaiD2: return "LaiD2";
    }
    return "?";
}

DCondition d_condition_from_string(const std::string& s) {
    if (s == "D1") return DCondition::D1;
    if (s == "D2") return DCondition::D2;
    if (s == "D3") return DCondition::D3;
    if (s == "D4") return DCondition::D4;
    if (s == "LaiD1") return DCondition::LaiD1;
    if (s == "LaiD2") return DCondition::LaiD2;
    throw std::invalid_argument("unknown discrete condition: '" + s + "'");
}

QuadResult eval_D(const ProblemSpec& spec, const CoveringSequence& seq, DCondition which,
                  const QuadConfig& cfg) {
    seq.validate();
    const auto& e = spec.exps;
    const bool p1 = which == DCondition::D3 || which == DCondition::D4;
    if (p1 && !e.p1_regime())
        throw std::invalid_argument(to_string(which) + " requires p = 1 and 0 < q < 1");
    if (!p1 && !e.main_regime())
        throw std::invalid_argument(to_string(which) + " requires 0 < q < 1 < p");

    const WeightSpec w0 = spec.w.with_unit_scale();
    const WeightSpec v0 = spec.v.with_unit_scale();
    const double q = e.q;
    const QuadConfig icfg = cfg.inner();

    double w_deg, v_deg;
    Density dv = p1 ? Density(v0, e.q_prime()) : Density(v0, 1.0 - e.p_prime());
    if (p1) {
        w_deg = 1.0 - e.q_prime();
        v_deg = e.q_prime();
    } else {
        w_deg = e.r() / q;
        v_deg = -e.r() / e.p;
    }

    auto U = [&](double x, double y) { return spec.U.eval(x, y); };

    double total = 0.0, err = 0.0;
    std::string reason;
    for (std::size_t k = seq.interior_begin(); k < seq.interior_end(); ++k) {
        const double tkm = seq.points[k - 1], tk = seq.points[k], tkp = seq.points[k + 1];
        double term = 0.0;
        switch (which) {
            case DCondition::D1: {
                const double wm = w0.integral(tkm, tk);
                auto f = [&](double z) { return prod0(powi(U(tk, z), e.p_prime()), dv.eval_base(z)); };
                const QuadResult iv = quad::integrate(f, tk, tkp, icfg);
                term = prod0(powi(wm, e.r() / q), powi(iv.value, e.r() / e.p_prime()));
                err += iv.err_estimate;
                break;
            }
            case DCondition::D2: {
                auto fw = [&](double t) { return prod0(w0.eval(t), powi(U(t, tk), q)); };
                const QuadResult wm = quad::integrate(fw, tkm, tk, icfg);
                const double vm = dv.integral_base(tk, tkp);
                term = prod0(powi(wm.value, e.r() / q), powi(vm, e.r() / e.p_prime()));
                err += wm.err_estimate;
                break;
            }
            case DCondition::D3:
            case DCondition::D4: {
                double wm;
                if (which == DCondition::D3) {
                    wm = w0.integral(tkm, tk);
                } else {
                    auto fw = [&](double t) { return prod0(w0.eval(t), powi(U(t, tk), q)); };
                    wm = quad::integrate(fw, tkm, tk, icfg).value;
                }
                const double kexp = which == DCondition::D3 ? -e.q_prime() : q;
                auto g = [&](double z) { return prod0(powi(U(tk, z), kexp), dv.eval_base(z)); };
                const QuadResult sup = quad::sup_on(g, tk, tkp, icfg);
                term = prod0(powi(wm, 1.0 - e.q_prime()), sup.value);
                break;
            }
            case DCondition::LaiD1: {
                // forward w-window, backward kernel-v window (primal operator)
                const double wm = w0.integral(tk, tkp);
                auto f = [&](double z) { return prod0(powi(U(z, tk), e.p_prime()), dv.eval_base(z)); };
                const QuadResult iv = quad::integrate(f, tkm, tk, icfg);
                term = prod0(powi(wm, e.r() / q), powi(iv.value, e.r() / e.p_prime()));
                err += iv.err_estimate;
                break;
            }
            case DCondition::LaiD2: {
                auto fw = [&](double t) { return prod0(w0.eval(t), powi(U(tk, t), q)); };
                const QuadResult wm = quad::integrate(fw, tk, tkp, icfg);
                const double vm = dv.integral_base(tkm, tk);
                term = prod0(powi(wm.value, e.r() / q), powi(vm, e.r() / e.p_prime()));
                err += wm.err_estimate;
                break;
            }
        }
        if (std::isinf(term)) {
            QuadResult out;
            out.value = kInf;
            out.divergence_reason = "divergent window term at k=" + std::to_string(k);
            return out;
        }
        total += term;
    }
    QuadResult out;
    out.value = prod0(powi(spec.w.scale(), w_deg) * powi(spec.v.scale(), v_deg), total);
    out.err_estimate = err;
    out.converged = true;
    return out;
}

DSearchResult search_sup_D(const ProblemSpec& spec, DCondition which, int budget,
                           std::uint64_t seed, const QuadConfig& cfg) {
    if (budget < 10) throw std::invalid_argument("search_sup_D: budget must be >= 10");
    Rng rng(seed);
    const double lo = cfg.trunc_lo * 10, hi = cfg.trunc_hi / 10;

    DSearchResult best;
    best.best_value = -1.0;

    auto value_of = [&](const CoveringSequence& s) {
        ++best.evaluations;
        return eval_D(spec, s, which, cfg).value;
    };

    const double starts[] = {1e-2, 1.0, 1e2};
    const int per_start = std::max(3, budget / 3);
    for (double m : starts) {
        if (best.evaluations >= budget) break;
        std::vector<double> pts = {0.0, m, kInf};
        CoveringSequence cur = CoveringSequence::make(pts);
        double cur_v = value_of(cur);
        if (std::isinf(cur_v)) { best.best_seq = cur; best.best_value = cur_v; break; }

        int local_evals = 1;
        while (local_evals < per_start && best.evaluations < budget) {
            const int move = rng.uniform_int(0, 2);
            std::vector<double> cand = cur.points;
            if (move == 0) {
                // insert a log-uniform point
                cand.push_back(rng.log_uniform(lo, hi));
                std::sort(cand.begin(), cand.end());
                cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
                if (cand.size() == cur.points.size()) { ++local_evals; continue; }
            } else if (move == 1 && cur.points.size() > 3) {
                // delete an interior point
                const int k = rng.uniform_int(1, static_cast<int>(cur.points.size()) - 2);
                cand.erase(cand.begin() + k);
            } else {
                // relocate one interior point by a bracketed section search
                const int k = rng.uniform_int(1, static_cast<int>(cur.points.size()) - 2);
                const double a = (k == 1) ? lo : cur.points[k - 1] * 1.0000001;
                const double b = std::isinf(cur.points[k + 1]) ? hi : cur.points[k + 1] * 0.9999999;
                if (!(a < b)) { ++local_evals; continue; }
                double sl = std::log(a), sr = std::log(b);
                for (int it = 0; it < 12 && best.evaluations + 2 <= budget; ++it) {
                    const double m1 = sl + (sr - sl) / 3.0, m2 = sr - (sr - sl) / 3.0;
                    std::vector<double> c1 = cur.points, c2 = cur.points;
                    c1[k] = std::exp(m1);
                    c2[k] = std::exp(m2);
                    const double v1 = value_of(CoveringSequence::make(c1));
                    const double v2 = value_of(CoveringSequence::make(c2));
                    local_evals += 2;
                    if (v1 < v2) sl = m1; else sr = m2;
                    if (std::max(v1, v2) > cur_v) {
                        cur = CoveringSequence::make(v1 > v2 ? c1 : c2);
                        cur_v = std::max(v1, v2);
                    }
                    if (std::isinf(cur_v)) break;
                }
                ++local_evals;
                if (std::isinf(cur_v)) break;
                continue;
            }
            CoveringSequence cs = CoveringSequence::make(cand);
            const double v = value_of(cs);
            ++local_evals;
            if (v > cur_v) { cur = cs; cur_v = v; }
            if (std::isinf(cur_v)) break;
        }
        if (cur_v > best.best_value) {
            best.best_seq = cur;
            best.best_value = cur_v;
        }
        if (std::isinf(best.best_value)) break;
    }
    return best;
}

}  // namespace hb
