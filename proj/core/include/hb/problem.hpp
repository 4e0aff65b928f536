#pragma once

#include <string>
#include <vector>

#include "hb/kernel.hpp"
#include "hb/weight.hpp"

namespace hb {

/// Orientation of the inequality the functionals characterize:
/// primal_H:   || int_0^t f(x) U(x,t) dx ||_{q,w} <= C ||f||_{p,v}
/// dual_Hstar: || int_t^inf f(x) U(t,x) dx ||_{q,w} <= C ||f||_{p,v}
enum class Direction { primal_H, dual_Hstar };

/// Test-function cone: all nonnegative functions, or the nonincreasing ones
/// (the latter switches to the u-multiplier operator and its own conditions).
enum class Cone { all_nonneg, nonincreasing };

std::string to_string(Direction d);
std::string to_string(Cone c);
Direction direction_from_string(const std::string& s);
Cone cone_from_string(const std::string& s);

struct ProblemSpec {
    WeightSpec v;
    WeightSpec w;
    Kernel U;
    Exponents exps;
    Direction direction = Direction::dual_Hstar;
    Cone cone = Cone::all_nonneg;

    ProblemSpec(WeightSpec v_, WeightSpec w_, Kernel U_, Exponents e_,
                Direction d = Direction::dual_Hstar, Cone c = Cone::all_nonneg)
        : v(std::move(v_)), w(std::move(w_)), U(std::move(U_)), exps(e_), direction(d), cone(c) {
        exps.validate();
        if (cone == Cone::nonincreasing && U.family() != KernelFamily::integral_of)
            throw std::invalid_argument(
                "nonincreasing cone: the kernel must be integral_of(u) so the u-multiplier operator is defined");
    }

    /// The problem under t -> 1/t: weights and kernel reflected so that the
    /// starred functionals of one orientation equal the plain ones of the other.
    ProblemSpec reflected() const {
        ProblemSpec out = *this;
        out.v = v.reflected_v(exps.p);
        out.w = w.reflected_w();
        out.U = U.reflected();
        out.direction = direction == Direction::primal_H ? Direction::dual_Hstar : Direction::primal_H;
        return out;
    }
};

struct FunctionalValue {
    std::string name;
    double value = 0.0;   ///< +inf when divergent
    double err = 0.0;
    bool finite = true;
    std::string reason;   ///< divergence reason when not finite
};

struct FunctionalReport {
    std::vector<FunctionalValue> items;
    double predicted_constant = kInf;  ///< finite iff all constituents finite
    bool bounded = false;
    std::string regime;
};

}  // namespace hb
