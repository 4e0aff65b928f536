#pragma once

// Shared problem fixtures used across the unit and acceptance suites.

#include "hb/problem.hpp"

namespace fixtures {

using namespace hb;

inline WeightSpec two_power(double c1, double e1, double split, double c2, double e2) {
    Piece a{0.0, split, {{c1, e1, 0.0, Term::Exp::none}}, false};
    Piece b{split, kInf, {{c2, e2, 0.0, Term::Exp::none}}, false};
    return WeightSpec({a, b});
}

inline WeightSpec indicator_weight(double hi) {
    Piece a{0.0, hi, {{1.0, 0.0, 0.0, Term::Exp::none}}, false};
    Piece z{hi, kInf, {{0.0, 0.0, 0.0, Term::Exp::none}}, false};
    return WeightSpec({a, z});
}

inline WeightSpec affine_weight(double c0, double c1) {
    Piece p{0.0, kInf, {{c0, 0.0, 0.0, Term::Exp::none}, {c1, 1.0, 0.0, Term::Exp::none}}, false};
    return WeightSpec({p});
}

// p=2, q=1/2 (r=2/3), primal orientation, flat kernel
inline ProblemSpec h1() {
    return ProblemSpec(two_power(1.0, -0.5, 1.0, 1.0, 3.0),   // v
                       two_power(1.0, 0.0, 1.0, 1.0, -3.0),   // w
                       Kernel::constant(), Exponents{2.0, 0.5}, Direction::primal_H);
}

// h1 with a genuine kernel
inline ProblemSpec h1_rl() {
    ProblemSpec s = h1();
    s.U = Kernel::riemann_liouville(1.0);
    s.v = two_power(1.0, -0.5, 1.0, 1.0, 5.0);  // heavier far weight to keep the pair finite
    return s;
}

// 1 < q < p baseline regime for the classical conditions; the w tail decays
// fast enough to beat the kernel growth in the q-th power
inline ProblemSpec h2() {
    return ProblemSpec(two_power(1.0, 0.5, 1.0, 1.0, 4.0),    // v
                       two_power(1.0, 0.0, 1.0, 1.0, -5.0),   // w
                       Kernel::riemann_liouville(1.0), Exponents{3.0, 2.0}, Direction::primal_H);
}

// p = 1 fixture, affine v
inline ProblemSpec p1() {
    return ProblemSpec(affine_weight(1.0, 1.0),               // v = 1 + t
                       two_power(1.0, 0.0, 1.0, 1.0, -3.0),   // w
                       Kernel::constant(), Exponents{1.0, 0.5}, Direction::dual_Hstar);
}

// nonincreasing-cone fixture, p = 1 branch
inline ProblemSpec m1() {
    return ProblemSpec(two_power(1.0, 0.0, 1.0, 1.0, 3.0),    // v
                       two_power(1.0, 0.0, 1.0, 1.0, -3.0),   // w
                       Kernel::integral_of(WeightSpec::constant()), Exponents{1.0, 0.5},
                       Direction::dual_Hstar, Cone::nonincreasing);
}

// nonincreasing cone with p > 1 and infinite v-mass (the zero branch of A8)
inline ProblemSpec m2() {
    return ProblemSpec(WeightSpec::power(1.0, 1.0),           // v = t, infinite mass
                       two_power(1.0, 0.0, 1.0, 1.0, -3.0),   // w
                       Kernel::integral_of(WeightSpec::constant()), Exponents{1.2, 0.5},
                       Direction::dual_Hstar, Cone::nonincreasing);
}

}  // namespace fixtures
