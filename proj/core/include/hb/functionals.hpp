#pragma once

#include <array>
#include <utility>

#include "hb/problem.hpp"
#include "hb/quad.hpp"

namespace hb {

/// Classical integral conditions for the primal inequality, evaluated as
/// printed. E1/E2 need 1 < p <= q, E3/E4 need 1 < q < p, E5 needs q < 1 <= p
/// (p = 1 uses the esssup limit of the dual-norm factor). Weight scalings
/// enter analytically with degrees (1/q in w, -1/p in v).
quad::QuadResult eval_E(const ProblemSpec& spec, int which, const quad::QuadConfig& cfg);

/// The pair of integral conditions characterizing boundedness for
/// 0 < q < 1 < p. direction = dual_Hstar gives the plain pair (for the
/// t -> inf operator), primal_H the starred pair. Divergence is a verdict
/// (+inf), not an error. Scaling degrees: r/q in w, -r/p in v.
std::pair<quad::QuadResult, quad::QuadResult> eval_A12(const ProblemSpec& spec,
                                                       const quad::QuadConfig& cfg);

/// The p = 1 pair (esssup forms); q' < 0 here. Scaling degrees: 1-q' in w,
/// q' in v.
std::pair<quad::QuadResult, quad::QuadResult> eval_A34(const ProblemSpec& spec,
                                                       const quad::QuadConfig& cfg);

/// The nonincreasing-cone conditions for the u-multiplier operator
/// f -> int_t^inf f u. Requires cone = nonincreasing and kernel integral_of(u).
/// Returns {A5, A6, A7, A8}; A5/A6 apply for p <= 1, A6/A7/A8 for p > 1
/// (the inapplicable entries are NaN-valued with an explanatory reason).
/// A8 is 0 by definition when int v = inf.
std::array<quad::QuadResult, 4> eval_A5678(const ProblemSpec& spec, const quad::QuadConfig& cfg);

/// Evaluate one functional by name: E1..E5, A1..A8, and the starred forms
/// A1*..A4* (aliases As1..As4). The starred forms evaluate the opposite
/// orientation of spec.direction by reflection-free direct formulas.
quad::QuadResult eval_functional(const ProblemSpec& spec, const std::string& name,
                                 const quad::QuadConfig& cfg);

/// Select the conditions matching the regime, evaluate them, and report the
/// boundedness verdict plus the predicted optimal constant:
/// (A_i + A_j)^{1/r} for 0<q<1<p (r = -q' when p = 1), or the direct sum of
/// the nonincreasing-cone conditions. No universal-constant calibration is
/// applied; the raw sum is reported. p < 1 on the all-nonneg cone is rejected
/// (the inequality can never hold there for nontrivial data).
FunctionalReport predict(const ProblemSpec& spec, const quad::QuadConfig& cfg);

}  // namespace hb
