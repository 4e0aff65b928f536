#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hb/problem.hpp"
#include "hb/quad.hpp"

namespace hb {

/// Finite increasing partition of (0, inf): first point 0, last point +inf,
/// at least one interior point.
struct CoveringSequence {
    std::vector<double> points;

    static CoveringSequence make(std::vector<double> pts);
    std::size_t size() const { return points.size(); }
    /// interior indices run over 1 .. size()-2
    std::size_t interior_begin() const { return 1; }
    std::size_t interior_end() const { return points.size() - 1; }
    void validate() const;
};

enum class DCondition { D1, D2, D3, D4, LaiD1, LaiD2 };
std::string to_string(DCondition d);
DCondition d_condition_from_string(const std::string& s);

/// Value of a discrete condition on one covering sequence: the sum over
/// interior k of products of window integrals. D1/D2 (0<q<1<p) and D3/D4
/// (p=1) use the backward w-window [t_{k-1},t_k] and forward v-window
/// [t_k,t_{k+1}]; the Lai forms use the opposite (forward w, backward v)
/// windows of the primal-operator characterization. Any evaluated sequence is
/// a lower bound for the supremum over all covering sequences.
quad::QuadResult eval_D(const ProblemSpec& spec, const CoveringSequence& seq, DCondition which,
                        const quad::QuadConfig& cfg);

struct DSearchResult {
    CoveringSequence best_seq;
    double best_value = 0.0;
    int evaluations = 0;
};

/// Local search for a near-maximizing covering sequence: multi-start from
/// three-point seeds {0, m, inf}, moves are insert (log-uniform), delete, and
/// relocate (section search); only strict improvements are accepted, so the
/// best value is nondecreasing in budget. Deterministic given the seed.
DSearchResult search_sup_D(const ProblemSpec& spec, DCondition which, int budget,
                           std::uint64_t seed, const quad::QuadConfig& cfg);

}  // namespace hb
