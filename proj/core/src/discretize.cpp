#include "hb/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hb {

namespace {

double seg_quantity(const LevelSequence& lv, const Kernel& U, double q, int k) {
    const double a = lv.level(k), b = lv.level(k + 1);
    return prod0(lv.cap_pow(k), powi(U.eval(a, b), q));
}

}  // namespace

Rescaled rescale_to_cap_power(const WeightSpec& w, double cap) {
    if (!(cap > 1.0)) throw std::invalid_argument("rescale: cap must exceed 1");
    const double mass = w.total_mass();
    if (!std::isfinite(mass) || !(mass > 0))
        throw std::invalid_argument("rescale: weight must have positive finite total mass");
    const double k_exact = std::log(mass) / std::log(cap);
    int K = static_cast<int>(std::ceil(k_exact - 1e-12));
    double c = std::pow(cap, K) / mass;
    if (c < 1.0) { ++K; c = std::pow(cap, K) / mass; }
    return {w.scaled(c), K, c};
}

LevelSequence build_levels(const WeightSpec& w, double cap, int mu, int K, int buffer) {
    if (!(cap > 1.0)) throw std::invalid_argument("build_levels: cap must exceed 1");
    if (mu > K - 2) throw std::invalid_argument("build_levels: need mu <= K-2");
    if (buffer < 0) throw std::invalid_argument("build_levels: buffer must be nonnegative");
    const double mass = w.total_mass();
    const double want = std::pow(cap, K);
    if (!std::isfinite(mass) || std::abs(mass - want) > 1e-9 * want)
        throw std::invalid_argument(
            "build_levels: total mass " + fmt17(mass) + " is not cap^K = " + fmt17(want) +
            "; rescale the weight first (rescale_to_cap_power)");

    LevelSequence lv;
    lv.cap = cap;
    lv.K = K;
    lv.mu = mu;
    lv.lo = mu - buffer;
    lv.t.resize(static_cast<std::size_t>(K - lv.lo) + 1);
    for (int k = lv.lo; k < K; ++k)
        lv.t[static_cast<std::size_t>(k - lv.lo)] = w.level_point(std::pow(cap, k));
    lv.t.back() = kInf;
    for (std::size_t i = 0; i + 1 < lv.t.size(); ++i)
        if (!(lv.t[i] <= lv.t[i + 1]))
            throw std::runtime_error("build_levels: levels not nondecreasing");
    return lv;
}

BlockStructure build_blocks(const LevelSequence& lv, const WeightSpec& /*w*/, const Kernel& U,
                            double q, const quad::QuadConfig& /*cfg*/) {
    BlockStructure bs;
    const int K = lv.K;
    std::vector<double> s;  // segment quantities for k in [mu, K-1]
    for (int k = lv.mu; k < K; ++k) s.push_back(seg_quantity(lv, U, q, k));
    auto seg = [&](int k) { return s[static_cast<std::size_t>(k - lv.mu)]; };

    bs.starts = {lv.mu, lv.mu + 1};
    while (true) {
        const int n = static_cast<int>(bs.starts.size()) - 1;
        const int kn = bs.starts[static_cast<std::size_t>(n)];
        if (kn == K) {  // terminal: the previous push already reached K
            bs.N = n - 1;
            break;
        }
        double prev = 0.0;
        for (int k = bs.starts[static_cast<std::size_t>(n - 1)]; k < kn; ++k) prev += seg(k);
        int found = -1;
        double acc = 0.0;
        for (int j = kn + 1; j <= K; ++j) {
            acc += seg(j - 1);
            if (acc >= lv.cap * prev) { found = j; break; }
        }
        if (found < 0) {  // accumulation never reaches the threshold
            bs.N = n;
            bs.starts.push_back(K);
            break;
        }
        bs.starts.push_back(found);
    }
    for (int n = 1; n <= bs.N; ++n)
        if (bs.starts[static_cast<std::size_t>(n)] + 1 < bs.starts[static_cast<std::size_t>(n + 1)])
            bs.multi.push_back(n);
    return bs;
}

BlockReport verify_block_properties(const LevelSequence& lv, const BlockStructure& bs,
                                    const WeightSpec& w, const Kernel& U, double q,
                                    const quad::QuadConfig& cfg) {
    BlockReport rep;
    const double cap = lv.cap;
    const int N = bs.N;
    const quad::QuadConfig icfg = cfg.inner();
    const double budget = 1e-9;

    std::vector<double> s;
    for (int k = lv.mu; k < lv.K; ++k) s.push_back(seg_quantity(lv, U, q, k));
    auto seg = [&](int k) { return s[static_cast<std::size_t>(k - lv.mu)]; };
    auto block_sum = [&](int n) {
        double acc = 0.0;
        for (int k = bs.starts[static_cast<std::size_t>(n)];
             k < bs.starts[static_cast<std::size_t>(n + 1)]; ++k)
            acc += seg(k);
        return acc;
    };
    auto fail = [&rep](const std::string& what, int n) {
        rep.ok = false;
        if (rep.failure.empty()) rep.failure = what + " violated at block n=" + std::to_string(n);
    };

    // block growth: block_n >= cap * block_{n-1} for n <= N-1
    for (int n = 1; n <= N - 1; ++n) {
        const double lhs = block_sum(n), rhs = cap * block_sum(n - 1);
        if (rhs > 0 && std::isfinite(rhs)) {
            const double ratio = lhs / rhs;
            rep.growth_min_ratio = std::min(rep.growth_min_ratio, ratio);
            if (ratio < 1.0 - budget) fail("block growth", n);
        }
    }
    // prefix domination with the exact constant cap/(cap-1), for n <= N
    for (int n = 1; n <= N; ++n) {
        double prefix = 0.0;
        for (int k = lv.mu; k < bs.starts[static_cast<std::size_t>(n)]; ++k) prefix += seg(k);
        const double rhs = cap / (cap - 1.0) * block_sum(n - 1);
        if (rhs > 0 && std::isfinite(rhs)) {
            const double ratio = prefix / rhs;
            rep.prefix_max_ratio = std::max(rep.prefix_max_ratio, ratio);
            if (ratio > 1.0 + budget) fail("prefix domination", n);
        }
    }
    // partial multi-block sums stay strictly below the threshold
    for (int n : bs.multi) {
        double partial = 0.0;
        for (int k = bs.starts[static_cast<std::size_t>(n)];
             k <= bs.starts[static_cast<std::size_t>(n + 1)] - 2; ++k)
            partial += seg(k);
        const double rhs = cap * block_sum(n - 1);
        if (rhs > 0 && std::isfinite(rhs)) {
            const double ratio = partial / rhs;
            rep.partial_max_ratio = std::max(rep.partial_max_ratio, ratio);
            if (ratio >= 1.0 + budget) fail("partial block bound", n);
        }
    }
    // partition property: each segment index is a block end or interior to a
    // multi-segment block
    {
        std::vector<bool> covered(static_cast<std::size_t>(lv.K - lv.mu), false);
        auto cover = [&](int k) {
            if (k >= lv.mu && k < lv.K) covered[static_cast<std::size_t>(k - lv.mu)] = true;
        };
        for (int n = 0; n <= N; ++n) cover(bs.starts[static_cast<std::size_t>(n + 1)] - 1);
        for (int n : bs.multi)
            for (int k = bs.starts[static_cast<std::size_t>(n)];
                 k <= bs.starts[static_cast<std::size_t>(n + 1)] - 2; ++k)
                cover(k);
        rep.partition_ok = std::all_of(covered.begin(), covered.end(), [](bool x) { return x; });
        if (!rep.partition_ok) fail("segment partition", -1);
    }

    auto kernel_weight_integral = [&](double a, double b, double y) {
        auto f = [&](double x) { return prod0(w.eval(x), powi(U.eval(x, y), q)); };
        return quad::integrate(f, a, b, icfg).value;
    };

    // measured constant: block sum against the spanning kernel-weight integral
    for (int n = 1; n <= N; ++n) {
        const double lhs = block_sum(n - 1);
        const int kn2 = (n >= 2) ? bs.starts[static_cast<std::size_t>(n - 2)] : lv.mu - 1;
        const double a = lv.level(kn2);
        const double b = lv.level(bs.starts[static_cast<std::size_t>(n)]);
        const double rhs = kernel_weight_integral(a, b, b);
        if (rhs > 0 && std::isfinite(rhs) && std::isfinite(lhs))
            rep.seg_vs_integral_max = std::max(rep.seg_vs_integral_max, lhs / rhs);
    }

    // measured constant: weighted prefix against block + boundary term, on a
    // deterministic sample of (n, k, t) triples
    for (int n = 1; n <= N; ++n) {
        const int kn1 = bs.starts[static_cast<std::size_t>(n + 1)];
        for (int k = lv.mu; k <= kn1 - 1; ++k) {
            if ((k - lv.mu) % std::max(1, (kn1 - lv.mu) / 4) != 0 && k != kn1 - 1) continue;
            const double tk = lv.level(k);
            const double tk1 = lv.level(std::min(k + 1, lv.K));
            const double t = std::isinf(tk1) ? 2.0 * std::max(tk, 1.0) : std::sqrt(tk * tk1);
            if (!(t > tk)) continue;
            const double lhs = kernel_weight_integral(lv.level(lv.mu), t, t);
            const double boundary = prod0(lv.cap_pow(k), powi(U.eval(tk, t), q));
            const double rhs = block_sum(n - 1) + boundary;
            if (rhs > 0 && std::isfinite(rhs) && std::isfinite(lhs))
                rep.weighted_prefix_max = std::max(rep.weighted_prefix_max, lhs / rhs);
            if (k <= kn1 - 2) {
                const double rhs2 = block_sum(n - 1);
                if (rhs2 > 0 && std::isfinite(rhs2) && std::isfinite(lhs))
                    rep.weighted_prefix_strict_max =
                        std::max(rep.weighted_prefix_strict_max, lhs / rhs2);
            }
        }
    }
    return rep;
}

RatioReport prop89_check(double alpha, double D, const std::vector<double>& b,
                         const std::vector<double>& c) {
    if (!(alpha > 0) || !(D > 1)) throw std::invalid_argument("prop89: need alpha > 0, D > 1");
    if (b.size() != c.size() || b.empty()) throw std::invalid_argument("prop89: size mismatch");
    for (std::size_t k = 0; k + 1 < b.size(); ++k)
        if (b[k + 1] < D * b[k] * (1.0 - 1e-12))
            throw std::invalid_argument("prop89: hypothesis b_{k+1} >= D b_k violated at k=" +
                                        std::to_string(k));
    RatioReport rep;
    double suffix = 0.0;
    std::vector<double> suf(b.size());
    for (std::size_t i = b.size(); i-- > 0;) {
        suffix += c[i];
        suf[i] = suffix;
    }
    for (std::size_t k = 0; k < b.size(); ++k) {
        rep.lhs = std::max(rep.lhs, powi(suf[k], alpha) * b[k]);
        rep.rhs = std::max(rep.rhs, powi(c[k], alpha) * b[k]);
    }
    rep.bound = D / std::pow(std::pow(D, 1.0 / alpha) - 1.0, alpha);
    rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : (rep.lhs > 0 ? kInf : 0.0);
    rep.ok = rep.lhs <= rep.bound * rep.rhs * (1.0 + 1e-9);
    return rep;
}

RatioReport prop3_check(double alpha, double D, const std::vector<double>& b,
                        const std::vector<double>& c) {
    if (!(alpha > 0) || !(D > 1)) throw std::invalid_argument("prop3: need alpha > 0, D > 1");
    if (b.size() != c.size() || b.empty()) throw std::invalid_argument("prop3: size mismatch");
    for (std::size_t k = 0; k + 1 < b.size(); ++k)
        if (b[k + 1] < D * b[k] * (1.0 - 1e-12))
            throw std::invalid_argument("prop3: hypothesis b_{k+1} >= D b_k violated at k=" +
                                        std::to_string(k));
    RatioReport rep;
    double suffix_sum = 0.0, suffix_max = 0.0, lhs_sum = 0.0, lhs_sup = 0.0, rhs = 0.0;
    for (std::size_t i = b.size(); i-- > 0;) {
        suffix_sum += c[i];
        suffix_max = std::max(suffix_max, c[i]);
        lhs_sum += powi(suffix_sum, alpha) * b[i];
        lhs_sup += powi(suffix_max, alpha) * b[i];
        rhs += powi(c[i], alpha) * b[i];
    }
    rep.lhs = std::max(lhs_sum, lhs_sup);
    rep.rhs = rhs;
    rep.ratio = rhs > 0 ? rep.lhs / rhs : (rep.lhs > 0 ? kInf : 0.0);
    rep.ok = std::isfinite(rep.ratio);
    return rep;
}

RatioReport prop4_check(double alpha, double theta, const std::vector<double>& t,
                        const std::vector<double>& a, const Kernel& U,
                        const quad::QuadConfig& /*cfg*/) {
    if (!(alpha > 0) || !(theta >= 1)) throw std::invalid_argument("prop4: need alpha > 0, theta >= 1");
    if (t.size() != a.size() + 1 || a.empty())
        throw std::invalid_argument("prop4: need one more point than coefficients");
    const double growth = 2.0 * std::pow(theta, alpha);
    for (std::size_t k = 0; k + 2 < t.size() - 0 && k + 1 < a.size(); ++k)
        if (a[k + 1] < growth * a[k] * (1.0 - 1e-12))
            throw std::invalid_argument("prop4: hypothesis a_{k+1} >= 2 theta^alpha a_k violated at k=" +
                                        std::to_string(k));
    RatioReport rep;
    const double tmax = t.back();
    for (std::size_t k = 0; k < a.size(); ++k) {
        rep.lhs += a[k] * powi(U.eval(t[k], tmax), alpha);
        rep.rhs += a[k] * powi(U.eval(t[k], t[k + 1]), alpha);
    }
    rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : (rep.lhs > 0 ? kInf : 0.0);
    rep.ok = std::isfinite(rep.ratio);
    return rep;
}

RatioReport prop59_check(double alpha, double theta, double a, double b, double c,
                         const Kernel& U, const std::function<double(double)>& psi,
                         const quad::QuadConfig& cfg) {
    if (!(0 <= a && a < b && b < c)) throw std::invalid_argument("prop59: need 0 <= a < b < c");
    if (!(alpha > 0) || !(theta >= 1)) throw std::invalid_argument("prop59: need alpha > 0, theta >= 1");
    {
        const double lo = std::max(a, cfg.trunc_lo), hi = std::isinf(c) ? cfg.trunc_hi : c;
        double prev = kInf;
        for (int i = 0; i <= 24; ++i) {
            const double z = lo * std::pow(hi / lo, i / 24.0);
            const double v = psi(z);
            if (v > prev * (1.0 + 1e-9))
                throw std::invalid_argument("prop59: psi must be nonincreasing");
            prev = v;
        }
    }
    auto g_from = [&](double base) {
        return [&, base](double z) { return prod0(powi(U.eval(base, z), alpha), psi(z)); };
    };
    RatioReport rep;
    rep.lhs = quad::sup_on(g_from(a), a, c, cfg).value;
    const double s1 = quad::sup_on(g_from(a), a, b, cfg).value;
    const double s2 = quad::sup_on(g_from(b), b, c, cfg).value;
    rep.rhs = s1 + s2;
    rep.bound = 1.0 + theta;
    rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : (rep.lhs > 0 ? kInf : 0.0);
    rep.ok = rep.lhs <= rep.bound * rep.rhs * (1.0 + 1e-9);
    return rep;
}

}  // namespace hb
