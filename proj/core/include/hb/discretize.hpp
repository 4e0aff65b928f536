#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hb/kernel.hpp"
#include "hb/quad.hpp"
#include "hb/weight.hpp"

namespace hb {

/// Geometric level sequence of a finite-mass weight: points t_k with
/// W(t_k) = cap^k for k < K (leftmost solution where W is flat), t_K = inf,
/// stored down to mu - buffer. cap = 2 theta^q > 1. Segments are
/// seg(k) = [t_k, t_{k+1}).
struct LevelSequence {
    double cap = 2.0;  ///< the geometric ratio of the levels
    int K = 0;
    int mu = 0;
    int lo = 0;  ///< lowest stored index
    std::vector<double> t;

    double level(int k) const {
        if (k < lo || k > K) throw std::out_of_range("level index out of stored range");
        return t[static_cast<std::size_t>(k - lo)];
    }
    double cap_pow(int k) const { return std::pow(cap, k); }
};

/// Greedy grouping of segments into blocks: starts k_0 = mu, k_1 = mu+1, and
/// each next start is the smallest index whose accumulated segment quantity
/// reaches cap times the previous block. `multi` lists the block indices n
/// whose block holds more than one segment.
struct BlockStructure {
    std::vector<int> starts;  ///< k_0 .. k_{N+1} with k_{N+1} = K
    std::vector<int> multi;   ///< the n with starts[n]+1 < starts[n+1]
    int N = 0;
};

struct Rescaled {
    WeightSpec w;
    int K = 0;
    double c = 1.0;  ///< w was multiplied by c in [1, cap)
};

/// Scale a finite-mass weight so its total mass is an integer power of cap.
Rescaled rescale_to_cap_power(const WeightSpec& w, double cap);

/// Pre: total mass of w equals cap^K within 1e-9 relative (rescale first) and
/// mu <= K-2. Levels are solved by bracketed bisection on the monotone W.
LevelSequence build_levels(const WeightSpec& w, double cap, int mu, int K, int buffer = 2);

/// Greedy block scan over segment quantities cap^k U^q(seg k). An infinite
/// segment quantity (unbounded kernel on the last segment) satisfies the
/// accumulation rule immediately.
BlockStructure build_blocks(const LevelSequence& lv, const WeightSpec& w, const Kernel& U,
                            double q, const quad::QuadConfig& cfg);

struct BlockReport {
    bool ok = true;
    std::string failure;  ///< names the first violated hard inequality

    // hard inequalities (violations beyond the 1e-9 quadrature budget fail)
    double growth_min_ratio = kInf;   ///< min_n block_n / (cap * block_{n-1}), >= 1
    double prefix_max_ratio = 0.0;    ///< max_n prefix / (cap/(cap-1) * block_{n-1}), <= 1
    double partial_max_ratio = 0.0;   ///< max over multi-blocks, < 1

    // soft comparisons: measured constants of the two integral estimates
    double seg_vs_integral_max = 0.0;      ///< block sum vs kernel-weight integral
    double weighted_prefix_max = 0.0;      ///< weighted prefix vs block + boundary term
    double weighted_prefix_strict_max = 0.0;
    bool partition_ok = true;  ///< every segment is a block end or interior to a multi-block
};

/// Checks the constructed blocks: the growth, prefix-domination and
/// partial-block hard inequalities with their exact constants, the partition
/// property of the index set, and the two integral comparisons whose
/// constants are only measured.
BlockReport verify_block_properties(const LevelSequence& lv, const BlockStructure& bs,
                                    const WeightSpec& w, const Kernel& U, double q,
                                    const quad::QuadConfig& cfg);

struct RatioReport {
    double lhs = 0.0;
    double rhs = 0.0;       ///< comparison side without any constant
    double ratio = 0.0;     ///< lhs / rhs
    double bound = kNaN;    ///< analytic constant when one exists
    bool ok = true;         ///< lhs <= bound * rhs when bound is analytic
};

/// sup_k (sum_{m>=k} c_m)^alpha b_k against sup_k c_k^alpha b_k for
/// geometrically dominated b (b_{k+1} >= D b_k). The analytic constant is
/// D / (D^{1/alpha} - 1)^alpha.
RatioReport prop89_check(double alpha, double D, const std::vector<double>& b,
                         const std::vector<double>& c);

/// Sum forms of the same comparison: reports the measured ratios for
/// sum_k (sum_{m>=k} c_m)^alpha b_k and sum_k (sup_{m>=k} c_m)^alpha b_k
/// against sum_k c_k^alpha b_k. No analytic constant is asserted; callers
/// freeze measured values as regression bounds.
RatioReport prop3_check(double alpha, double D, const std::vector<double>& b,
                        const std::vector<double>& c);

/// Kernel telescoping: sum a_k U^alpha(t_k, t_max) vs sum a_k U^alpha(t_k,
/// t_{k+1}) under a_{k+1} >= 2 theta^alpha a_k. Measured ratio only.
RatioReport prop4_check(double alpha, double theta, const std::vector<double>& t,
                        const std::vector<double>& a, const Kernel& U,
                        const quad::QuadConfig& cfg);

/// Supremum splitting at an interior point b: sup over [a,c) of
/// U^alpha(a,z) psi(z) against (1+theta) (sup over [a,b] + sup over [b,c)
/// with the kernel restarted at b), for nonincreasing psi.
RatioReport prop59_check(double alpha, double theta, double a, double b, double c,
                         const Kernel& U, const std::function<double(double)>& psi,
                         const quad::QuadConfig& cfg);

}  // namespace hb
