#include "hb/weight.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace hb {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1]
constexpr double kGLx[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGLw[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// deterministic panelled Gauss integration of f over [a, b] in log coordinates
double gauss_log(const std::function<double(double)>& f, double a, double b) {
    if (!(b > a)) return 0.0;
    const double sa = std::log(a), sb = std::log(b);
    const int panels = std::max(1, static_cast<int>(std::ceil((sb - sa) / 0.35)));
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double s0 = sa + (sb - sa) * p / panels;
        const double s1 = sa + (sb - sa) * (p + 1) / panels;
        const double c = 0.5 * (s0 + s1), h = 0.5 * (s1 - s0);
        double acc = 0.0;
        for (int i = 0; i < 8; ++i) {
            const double tp = std::exp(c + h * kGLx[i]);
            const double tm = std::exp(c - h * kGLx[i]);
            acc += kGLw[i] * (f(tp) * tp + f(tm) * tm);
        }
        total += acc * h;
    }
    return total;
}

double power_integral(double c, double e, double a, double b) {
    // int_a^b c t^e dt with a >= 0, b possibly inf
    if (c == 0.0 || a == b) return 0.0;
    if (e == -1.0) {
        if (a <= 0.0 || std::isinf(b)) return kInf;
        return c * std::log(b / a);
    }
    const double ep = e + 1.0;
    double hi_part, lo_part;
    if (std::isinf(b)) {
        if (ep > 0.0) return kInf;
        hi_part = 0.0;
    } else {
        hi_part = std::pow(b, ep);
    }
    if (a <= 0.0) {
        if (ep < 0.0) return kInf;
        lo_part = 0.0;
    } else {
        lo_part = std::pow(a, ep);
    }
    return c * (hi_part - lo_part) / ep;
}

}  // namespace

double Term::eval(double t) const {
    double v = coeff * std::pow(t, expo);
    switch (kind) {
        case Exp::none: break;
        case Exp::decay: v *= std::exp(-rate * t); break;
        case Exp::inv: v *= std::exp(-rate / t); break;
    }
    return v;
}

Term Term::reflected(double jac_expo) const {
    Term out = *this;
    out.expo = jac_expo - expo;
    if (kind == Exp::decay) out.kind = Exp::inv;
    else if (kind == Exp::inv) out.kind = Exp::decay;
    return out;
}

bool Term::prefix_finite() const {
    if (coeff == 0.0) return true;
    switch (kind) {
        case Exp::none: return expo > -1.0;
        case Exp::decay: return expo > -1.0;      // exp factor -> 1 at 0
        case Exp::inv: return rate > 0.0;         // superpolynomial decay at 0
    }
    return false;
}

bool Term::tail_finite() const {
    if (coeff == 0.0) return true;
    switch (kind) {
        case Exp::none: return expo < -1.0;
        case Exp::decay: return rate > 0.0;
        case Exp::inv: return expo < -1.0;        // exp factor -> 1 at inf
    }
    return false;
}

namespace {

// int_a^b of one term, a >= 0, b <= inf; +inf when analytically divergent.
double term_integral(const Term& tm, double a, double b) {
    if (tm.coeff == 0.0 || a >= b) return 0.0;
    if (tm.kind == Term::Exp::none) return power_integral(tm.coeff, tm.expo, a, b);

    if (a <= 0.0 && !tm.prefix_finite()) return kInf;
    if (std::isinf(b) && !tm.tail_finite()) return kInf;

    auto f = [&tm](double t) { return tm.eval(t); };
    const double ae = std::abs(tm.expo);

    if (tm.kind == Term::Exp::decay) {
        // significant range: below t_lo the exp factor is 1 to series accuracy,
        // above t_hi the term underflows
        double lo = a, hi = b;
        double head = 0.0, tail = 0.0;
        if (tm.rate > 0.0 && std::isinf(b)) hi = (750.0 + 60.0 * (ae + 1.0)) / tm.rate;
        if (lo <= 0.0) {
            const double t0 = std::min(hi, 1e-4 / std::abs(tm.rate));
            // int_0^t0 c t^e e^{-rt} ~ truncated exponential series, O((r t0)^4)
            double sgn = 1.0, rk = 1.0, fact = 1.0;
            for (int k = 0; k < 4; ++k) {
                head += sgn * tm.coeff * rk / fact * std::pow(t0, tm.expo + k + 1) / (tm.expo + k + 1);
                sgn = -sgn;
                rk *= tm.rate;
                fact *= (k + 1);
            }
            lo = t0;
        }
        if (hi <= lo) return head;
        return head + tail + gauss_log(f, lo, hi);
    }

    // inv kind
    double lo = a, hi = b;
    double tail = 0.0;
    if (tm.rate > 0.0 && lo < tm.rate / 800.0) lo = std::min(b, tm.rate / 800.0);
    if (std::isinf(hi)) {
        const double t1 = std::max(lo, 1e4 * std::abs(tm.rate));
        // int_t1^inf c t^e e^{-r/t} ~ series in r/t, O((r/t1)^4)
        double sgn = 1.0, rk = 1.0, fact = 1.0;
        for (int k = 0; k < 4; ++k) {
            // int_t1^inf t^{e-k} dt = t1^{e-k+1}/(k-1-e), finite since e<-1
            tail += sgn * tm.coeff * rk / fact * std::pow(t1, tm.expo - k + 1) / (k - 1.0 - tm.expo);
            sgn = -sgn;
            rk *= tm.rate;
            fact *= (k + 1);
        }
        hi = t1;
    }
    if (hi <= lo) return tail;
    return tail + gauss_log(f, lo, hi);
}

}  // namespace

double Piece::eval(double t) const {
    if (infinite) return kInf;
    double v = 0.0;
    for (const auto& tm : terms) v += tm.eval(t);
    return v;
}

PiecewiseFn::PiecewiseFn(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw std::invalid_argument("piecewise: no pieces");
    if (pieces_.front().lo != 0.0) throw std::invalid_argument("piecewise: cover must start at 0");
    if (!std::isinf(pieces_.back().hi)) throw std::invalid_argument("piecewise: cover must end at inf");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (!(pieces_[i].lo < pieces_[i].hi)) throw std::invalid_argument("piecewise: empty piece");
        if (i > 0 && pieces_[i].lo != pieces_[i - 1].hi)
            throw std::invalid_argument("piecewise: pieces must be contiguous and disjoint");
    }
    cum_.resize(pieces_.size() + 1, 0.0);
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        double mass;
        if (pieces_[i].infinite) {
            mass = kInf;
        } else {
            mass = 0.0;
            for (const auto& tm : pieces_[i].terms) mass += term_integral(tm, pieces_[i].lo, pieces_[i].hi);
        }
        cum_[i + 1] = cum_[i] + mass;
    }
}

const Piece& PiecewiseFn::piece_at(double t) const {
    for (const auto& p : pieces_)
        if (t < p.hi) return p;
    return pieces_.back();
}

double PiecewiseFn::eval(double t) const {
    if (!(t > 0)) throw std::domain_error("piecewise eval: t must be positive");
    return piece_at(t).eval(t);
}

double PiecewiseFn::piece_integral(double a, double b) const {
    if (b < a && b >= a * (1.0 - 1e-12)) return 0.0;  // grid round-off
    if (!(b >= a) || a < 0) throw std::invalid_argument("piecewise integral: bad interval");
    double total = 0.0;
    for (const auto& p : pieces_) {
        const double lo = std::max(a, p.lo);
        const double hi = std::min(b, p.hi);
        if (!(hi > lo)) continue;
        if (p.infinite) return kInf;
        for (const auto& tm : p.terms) total += term_integral(tm, lo, hi);
        if (std::isinf(total)) return kInf;
    }
    return total;
}

double PiecewiseFn::prefix(double t) const {
    if (!(t >= 0)) throw std::invalid_argument("prefix: t must be nonnegative");
    double total = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (t <= p.lo) break;
        if (t >= p.hi) {
            total += cum_[i + 1] - cum_[i];
        } else {
            if (p.infinite) return kInf;
            for (const auto& tm : p.terms) total += term_integral(tm, p.lo, t);
        }
        if (std::isinf(total)) return kInf;
    }
    return total;
}

double PiecewiseFn::tail(double t) const {
    if (!(t >= 0)) throw std::invalid_argument("tail: t must be nonnegative");
    double total = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (p.hi <= t) continue;
        if (t <= p.lo) {
            total += cum_[i + 1] - cum_[i];
        } else {
            if (p.infinite) return kInf;
            for (const auto& tm : p.terms) total += term_integral(tm, t, p.hi);
        }
        if (std::isinf(total)) return kInf;
    }
    return total;
}

PiecewiseFn PiecewiseFn::reflected(double jac_expo) const {
    std::vector<Piece> out;
    out.reserve(pieces_.size());
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
        Piece q;
        q.lo = std::isinf(it->hi) ? 0.0 : 1.0 / it->hi;
        q.hi = (it->lo == 0.0) ? kInf : 1.0 / it->lo;
        q.infinite = it->infinite;
        for (const auto& tm : it->terms) q.terms.push_back(tm.reflected(jac_expo));
        out.push_back(std::move(q));
    }
    return PiecewiseFn(std::move(out));
}

std::optional<PiecewiseFn> PiecewiseFn::powed(double s) const {
    std::vector<Piece> out;
    out.reserve(pieces_.size());
    for (const auto& p : pieces_) {
        Piece q;
        q.lo = p.lo;
        q.hi = p.hi;
        if (p.infinite) {
            if (s > 0) q.infinite = true;
            else q.terms.push_back({0.0, 0.0, 0.0, Term::Exp::none});
        } else if (p.terms.empty() || (p.terms.size() == 1 && p.terms[0].coeff == 0.0)) {
            if (s > 0) q.terms.push_back({0.0, 0.0, 0.0, Term::Exp::none});
            else q.infinite = true;  // 0^negative
        } else if (p.terms.size() == 1) {
            const Term& tm = p.terms[0];
            if (tm.coeff < 0) return std::nullopt;
            q.terms.push_back({std::pow(tm.coeff, s), tm.expo * s, tm.rate * s, tm.kind});
        } else {
            return std::nullopt;
        }
        out.push_back(std::move(q));
    }
    return PiecewiseFn(std::move(out));
}

// ---------------------------------------------------------------------------

WeightSpec::WeightSpec(std::vector<Piece> pieces, double scale)
    : fn_(std::move(pieces)), scale_(scale) {
    if (!(scale_ > 0) || !std::isfinite(scale_)) throw std::invalid_argument("weight: scale must be positive finite");
    const auto& ps = fn_.pieces();
    for (const auto& p : ps) {
        if (p.infinite) throw std::invalid_argument("weight: infinite piece not allowed");
        // sampled nonnegativity
        const double lo = std::max(p.lo, 1e-12);
        const double hi = std::min(p.hi, 1e12);
        if (hi > lo) {
            for (int i = 0; i <= 16; ++i) {
                const double t = lo * std::pow(hi / lo, i / 16.0);
                if (p.eval(t) < -1e-9) throw std::invalid_argument("weight: negative value at t=" + fmt17(t));
            }
        }
    }
    for (const auto& tm : ps.front().terms)
        if (!tm.prefix_finite())
            throw std::invalid_argument(
                "weight: divergent near 0 (power pieces touching 0 need exponent > -1)");
    // 0 < W(t): the first piece must carry some mass
    bool positive = false;
    const double plo = std::max(ps.front().lo, 1e-12);
    const double phi = std::min(ps.front().hi, 1e12);
    for (int i = 0; i <= 16 && !positive; ++i)
        positive = ps.front().eval(plo * std::pow(phi / plo, i / 16.0)) > 0.0;
    if (!positive) throw std::invalid_argument("weight: vanishes identically near 0, W(t) would be 0");
}

WeightSpec WeightSpec::constant(double c) { return power(c, 0.0); }

WeightSpec WeightSpec::power(double coeff, double expo) {
    Piece p;
    p.lo = 0.0;
    p.hi = kInf;
    p.terms.push_back({coeff, expo, 0.0, Term::Exp::none});
    return WeightSpec({p});
}

double WeightSpec::tail(double t) const { return scale_ * fn_.tail(t); }

WeightSpec WeightSpec::scaled(double lambda) const {
    if (!(lambda > 0)) throw std::invalid_argument("weight scaling must be positive");
    WeightSpec out = *this;
    out.scale_ = scale_ * lambda;
    return out;
}

WeightSpec WeightSpec::with_unit_scale() const {
    WeightSpec out = *this;
    out.scale_ = 1.0;
    return out;
}

double WeightSpec::level_point(double target) const {
    if (!(target > 0)) throw std::invalid_argument("level_point: target must be positive");
    const double total = total_mass();
    if (target > total * (1.0 + 1e-9)) throw std::invalid_argument("level_point: target exceeds total mass");

    double hi = 1e-30;
    while (prefix(hi) < target && hi < 1e300) hi *= 4.0;
    double lo = hi / 4.0;
    if (prefix(lo) >= target) lo = 0.0;
    // leftmost t with W(t) >= target; W is continuous so W(t) = target there
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = lo > 0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (prefix(mid) >= target) hi = mid;
        else lo = mid;
    }
    return hi;
}

WeightSpec WeightSpec::truncated(double m) const {
    if (!(m > 0) || std::isinf(m)) throw std::invalid_argument("truncated: m must be positive finite");
    std::vector<Piece> out;
    for (const auto& p : fn_.pieces()) {
        if (p.lo >= m) break;
        Piece q = p;
        q.hi = std::min(p.hi, m);
        out.push_back(std::move(q));
    }
    Piece zero;
    zero.lo = m;
    zero.hi = kInf;
    zero.terms.push_back({0.0, 0.0, 0.0, Term::Exp::none});
    out.push_back(std::move(zero));
    WeightSpec w = *this;
    w.fn_ = PiecewiseFn(std::move(out));
    return w;
}

WeightSpec WeightSpec::reflected_w() const {
    WeightSpec out = *this;
    out.fn_ = fn_.reflected(-2.0);
    return out;
}

WeightSpec WeightSpec::reflected_v(double p) const {
    if (!(p > 0)) throw std::invalid_argument("reflected_v: p must be positive");
    WeightSpec out = *this;
    out.fn_ = fn_.reflected(2.0 * (p - 1.0));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// value ~ t^E exp(-R/t) as t->0 (R >= 0); and ~ t^E exp(-R t) as t->inf
struct EndBehavior {
    double R = 0.0;
    double E = 0.0;
};

EndBehavior behavior_at_zero(const Piece& p) {
    EndBehavior b{kInf, 0.0};
    for (const auto& tm : p.terms) {
        if (tm.coeff == 0.0) continue;
        const double R = (tm.kind == Term::Exp::inv) ? tm.rate : 0.0;
        if (R < b.R || (R == b.R && tm.expo < b.E)) b = {R, tm.expo};
    }
    if (std::isinf(b.R)) b = {0.0, 0.0};
    return b;
}

EndBehavior behavior_at_inf(const Piece& p) {
    EndBehavior b{kInf, 0.0};
    for (const auto& tm : p.terms) {
        if (tm.coeff == 0.0) continue;
        const double R = (tm.kind == Term::Exp::decay) ? tm.rate : 0.0;
        if (R < b.R || (R == b.R && tm.expo > b.E)) b = {R, tm.expo};
    }
    if (std::isinf(b.R)) b = {0.0, 0.0};
    return b;
}

}  // namespace

/// Cached cumulative integral of a pointwise power of a multi-term weight.
class DensityCache {
public:
    DensityCache(const PiecewiseFn& base, double expo) {
        const double glo = 1e-12, ghi = 1e12;
        const int n = 4096;
        ts_.resize(n + 1);
        cum_.resize(n + 1, 0.0);
        auto dens = [&](double t) { return powi(base.eval(t), expo); };
        for (int i = 0; i <= n; ++i) ts_[i] = glo * std::pow(ghi / glo, double(i) / n);
        for (int i = 0; i < n; ++i) {
            double cell = gauss_log(dens, ts_[i], ts_[i + 1]);
            if (!std::isfinite(cell)) cell = kInf;
            cum_[i + 1] = cum_[i] + cell;
        }
        const EndBehavior b0 = behavior_at_zero(base.pieces().front());
        const EndBehavior bi = behavior_at_inf(base.pieces().back());
        const double R0 = expo * b0.R, E0 = expo * b0.E;
        const double Ri = expo * bi.R, Ei = expo * bi.E;
        e0_ = E0;
        if (R0 > 0) below_ = 0.0;
        else if (R0 == 0 && E0 > -1.0) below_ = dens(glo) * glo / (E0 + 1.0);
        else below_ = kInf;
        if (Ri > 0) above_ = 0.0;
        else if (Ri == 0 && Ei < -1.0) above_ = dens(ghi) * ghi / (-Ei - 1.0);
        else above_ = kInf;
    }

    double prefix(double t) const {
        if (std::isinf(below_)) return kInf;
        if (t <= ts_.front()) return below_ * powi(t / ts_.front(), e0_ + 1.0);
        if (t >= ts_.back()) return below_ + cum_.back();
        return below_ + interp(t);
    }
    double window(double a, double b) const {
        if (!(b > a)) return 0.0;
        const double ia = (a <= ts_.front()) ? 0.0 : interp(std::min(a, ts_.back()));
        const double ib = (b >= ts_.back()) ? cum_.back() : interp(b);
        double total = ib - ia;
        if (a < ts_.front()) total += prefix(ts_.front()) - prefix(std::max(a, 0.0));
        if (b > ts_.back()) total += tail(ts_.back());
        return total;
    }
    double tail(double t) const {
        if (std::isinf(above_)) return kInf;
        if (t >= ts_.back()) return above_;
        double rest = cum_.back() - (t <= ts_.front() ? 0.0 : interp(t));
        if (t <= ts_.front() && !std::isinf(below_))
            rest += below_ - below_ * powi(t / ts_.front(), e0_ + 1.0);
        return above_ + rest;
    }

private:
    std::vector<double> ts_, cum_;
    double below_ = 0.0, above_ = 0.0, e0_ = 0.0;

    double interp(double t) const {
        const auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
        const std::size_t i = std::min<std::size_t>(ts_.size() - 2, it - ts_.begin() - 1);
        const double f = std::log(t / ts_[i]) / std::log(ts_[i + 1] / ts_[i]);
        return cum_[i] + f * (cum_[i + 1] - cum_[i]);
    }
};

Density::Density(const WeightSpec& v, double expo)
    : expo_(expo), scale_(powi(v.scale(), expo)) {
    closed_ = v.fn().powed(expo);
    if (!closed_) cache_ = std::make_shared<DensityCache>(v.fn(), expo);
    base_ = std::make_shared<PiecewiseFn>(v.fn());
}

double Density::eval_base(double t) const {
    if (closed_) return closed_->eval(t);
    return powi(base_->eval(t), expo_);
}
double Density::prefix_base(double t) const {
    if (closed_) return closed_->prefix(t);
    return cache_->prefix(t);
}
double Density::tail_base(double t) const {
    if (closed_) return closed_->tail(t);
    return cache_->tail(t);
}
double Density::integral_base(double a, double b) const {
    if (closed_) return closed_->piece_integral(a, b);
    return cache_->window(a, b);
}
double Density::eval(double t) const { return prod0(scale_, eval_base(t)); }
double Density::prefix(double t) const { return prod0(scale_, prefix_base(t)); }
double Density::tail(double t) const { return prod0(scale_, tail_base(t)); }

DualDensity dual_density(const WeightSpec& v, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("dual_density: requires p >= 1");
    if (p == 1.0) return {true, Density(v, -1.0)};
    const double pp = p / (p - 1.0);
    return {false, Density(v, 1.0 - pp)};
}

// ---------------------------------------------------------------------------

void Exponents::validate() const {
    if (!(p > 0) || !std::isfinite(p)) throw std::invalid_argument("exponents: p must be positive finite");
    if (!(q > 0) || !std::isfinite(q)) throw std::invalid_argument("exponents: q must be positive finite");
}

double Exponents::r() const {
    if (p == q) throw std::invalid_argument("exponents: r undefined for p = q");
    return p * q / (p - q);
}

double Exponents::p_prime() const {
    if (p == 1.0) return kInf;
    return p / (p - 1.0);
}

double Exponents::q_prime() const {
    if (q == 1.0) return kInf;
    return q / (q - 1.0);
}

}  // namespace hb
