#include <doctest.h>

#include <cmath>

#include "hb/weight.hpp"
#include "support/reference.hpp"

using namespace hb;

namespace {

WeightSpec two_piece(double c1, double e1, double split, double c2, double e2) {
    Piece a{0.0, split, {{c1, e1, 0.0, Term::Exp::none}}, false};
    Piece b{split, kInf, {{c2, e2, 0.0, Term::Exp::none}}, false};
    return WeightSpec({a, b});
}

}  // namespace

TEST_CASE("pointwise evaluation") {
    CHECK(WeightSpec::power(1.0, 0.0).eval(5.0) == doctest::Approx(1.0));
    CHECK(WeightSpec::power(1.0, 2.0).eval(3.0) == doctest::Approx(9.0));
    CHECK(two_piece(1, 0, 1.0, 1, -2).eval(2.0) == doctest::Approx(0.25));
}

TEST_CASE("primitive closed forms") {
    CHECK(WeightSpec::power(1.0, 0.0).prefix(8.0) == doctest::Approx(8.0));
    for (double beta : {-0.5, 0.5, 2.0}) {
        const double t = 3.7;
        CHECK(WeightSpec::power(1.0, beta).prefix(t) ==
              doctest::Approx(std::pow(t, beta + 1.0) / (beta + 1.0)).epsilon(1e-14));
    }
    CHECK(two_piece(1, 0, 1.0, 1, -2).prefix(4.0) == doctest::Approx(1.75));
}

TEST_CASE("tails, including divergent and compactly supported") {
    CHECK(two_piece(1, 0, 1.0, 1, -2).tail(2.0) == doctest::Approx(0.5));
    CHECK(std::isinf(WeightSpec::constant().tail(3.0)));
    Piece a{0.0, 8.0, {{1.0, 0.0, 0.0, Term::Exp::none}}, false};
    Piece z{8.0, kInf, {{0.0, 0.0, 0.0, Term::Exp::none}}, false};
    CHECK(WeightSpec({a, z}).tail(3.0) == doctest::Approx(5.0));
}

TEST_CASE("tail plus prefix equals total mass when finite") {
    const WeightSpec w = two_piece(2.0, 0.5, 1.0, 2.0, -4.0);
    const double total = w.total_mass();
    CHECK(std::isfinite(total));
    for (double t : {0.01, 0.7, 1.0, 3.0, 50.0})
        CHECK(w.prefix(t) + w.tail(t) == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("prefix is strictly increasing and vanishes at 0") {
    const WeightSpec w = two_piece(1.0, -0.5, 2.0, 3.0, 1.0);
    double prev = 0.0;
    for (double t : {1e-6, 1e-3, 0.1, 1.0, 2.0, 10.0}) {
        const double W = w.prefix(t);
        CHECK(W > prev);
        prev = W;
    }
    CHECK(w.prefix(1e-12) < 1e-5);
}

TEST_CASE("weight validation rejects bad shapes") {
    // divergent at 0
    CHECK_THROWS_AS(WeightSpec::power(1.0, -1.5), std::invalid_argument);
    // identically zero near 0
    Piece z{0.0, 1.0, {{0.0, 0.0, 0.0, Term::Exp::none}}, false};
    Piece o{1.0, kInf, {{1.0, -3.0, 0.0, Term::Exp::none}}, false};
    CHECK_THROWS_AS(WeightSpec({z, o}), std::invalid_argument);
    // negative values
    Piece neg{0.0, kInf, {{1.0, 0.0, 0.0, Term::Exp::none}, {-5.0, 1.0, 0.0, Term::Exp::none}}, false};
    CHECK_THROWS_AS(WeightSpec({neg}), std::invalid_argument);
    // gap in the cover
    Piece g1{0.0, 1.0, {{1.0, 0.0, 0.0, Term::Exp::none}}, false};
    Piece g2{2.0, kInf, {{1.0, -3.0, 0.0, Term::Exp::none}}, false};
    CHECK_THROWS_AS(WeightSpec({g1, g2}), std::invalid_argument);
}

TEST_CASE("exp_decay pieces integrate against the reference") {
    Piece p{0.0, kInf, {{2.0, 0.0, 1.5, Term::Exp::decay}}, false};
    const WeightSpec w({p});
    CHECK(w.total_mass() == doctest::Approx(2.0 / 1.5).epsilon(1e-10));
    CHECK(w.prefix(2.0) ==
          doctest::Approx(ref::integrate([&](double t) { return w.eval(t); }, 0, 2.0, 40000, 1e-12))
              .epsilon(1e-8));
    CHECK(w.tail(3.0) == doctest::Approx(2.0 / 1.5 * std::exp(-4.5)).epsilon(1e-10));
}

TEST_CASE("affine piece (t+1) has exact closed-form integrals") {
    Piece p{0.0, kInf, {{1.0, 0.0, 0.0, Term::Exp::none}, {1.0, 1.0, 0.0, Term::Exp::none}}, false};
    const WeightSpec w({p});
    CHECK(w.eval(3.0) == doctest::Approx(4.0));
    CHECK(w.prefix(2.0) == doctest::Approx(2.0 + 2.0));
    CHECK(std::isinf(w.total_mass()));
}

TEST_CASE("dual density exponents") {
    // p = 2 flips the sign of the exponent
    const auto d = dual_density(WeightSpec::power(1.0, 1.5), 2.0);
    CHECK(!d.esssup_mode);
    CHECK(d.density.eval(2.0) == doctest::Approx(std::pow(2.0, -1.5)));
    // flat weights stay flat
    const auto d1 = dual_density(WeightSpec::constant(), 3.0);
    CHECK(d1.density.eval(17.0) == doctest::Approx(1.0));
    // p = 1 selects the esssup marker with density 1/v
    const auto dm = dual_density(WeightSpec::power(1.0, 1.0), 1.0);
    CHECK(dm.esssup_mode);
    CHECK(dm.density.eval(4.0) == doctest::Approx(0.25));
}

TEST_CASE("dual density of p=2 equals 1/v wherever v > 0") {
    const WeightSpec v = two_piece(2.0, 0.5, 1.5, 1.0, 2.0);
    const auto d = dual_density(v, 2.0);
    for (double t : {0.1, 1.0, 2.0, 9.0})
        CHECK(d.density.eval(t) == doctest::Approx(1.0 / v.eval(t)).epsilon(1e-13));
}

TEST_CASE("density over a zero piece is infinite where p > 1") {
    Piece a{0.0, 1.0, {{1.0, 0.0, 0.0, Term::Exp::none}}, false};
    Piece z{1.0, 2.0, {{0.0, 0.0, 0.0, Term::Exp::none}}, false};
    Piece b{2.0, kInf, {{1.0, -3.0, 0.0, Term::Exp::none}}, false};
    const auto d = dual_density(WeightSpec({a, z, b}), 2.0);
    CHECK(std::isinf(d.density.eval(1.5)));
    CHECK(std::isinf(d.density.prefix(3.0)));
    CHECK(d.density.prefix(0.5) == doctest::Approx(0.5));
}

TEST_CASE("numeric density fallback matches the reference on an affine weight") {
    Piece p{0.0, kInf, {{1.0, 0.0, 0.0, Term::Exp::none}, {1.0, 1.0, 0.0, Term::Exp::none}}, false};
    const WeightSpec v({p});
    const Density d(v, -2.0);  // (1+t)^{-2}, integrable
    CHECK(!d.closed_form());
    CHECK(d.prefix(1.0) == doctest::Approx(0.5).epsilon(1e-5));    // 1 - 1/(1+t)
    CHECK(d.tail(1.0) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(d.eval(3.0) == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("reflection formulas for power weights") {
    const WeightSpec w = WeightSpec::constant();
    CHECK(w.reflected_w().eval(2.0) == doctest::Approx(0.25));  // s^{-2}
    const WeightSpec wb = WeightSpec::power(1.0, 0.5);
    for (double s : {0.3, 1.0, 4.0})
        CHECK(wb.reflected_w().eval(s) == doctest::Approx(std::pow(s, -2.5)).epsilon(1e-13));
}

TEST_CASE("reflection is an involution") {
    const WeightSpec w = two_piece(1.0, 0.0, 1.0, 1.0, -2.0);
    const WeightSpec wrr = w.reflected_w().reflected_w();
    const WeightSpec v = two_piece(2.0, -0.5, 3.0, 2.0, 3.0);
    const WeightSpec vrr = v.reflected_v(2.0).reflected_v(2.0);
    for (int i = 0; i <= 40; ++i) {
        const double t = 1e-4 * std::pow(1e8, i / 40.0);
        CHECK(wrr.eval(t) == doctest::Approx(w.eval(t)).epsilon(1e-12));
        CHECK(vrr.eval(t) == doctest::Approx(v.eval(t)).epsilon(1e-12));
    }
}

TEST_CASE("w-role reflection transports the measure") {
    // int_0^s w~ = int_{1/s}^inf w
    const WeightSpec w = two_piece(1.0, 0.5, 2.0, 1.0, -3.0);
    const WeightSpec wr = w.reflected_w();
    for (double s : {0.1, 0.5, 1.0, 5.0})
        CHECK(wr.prefix(s) == doctest::Approx(w.tail(1.0 / s)).epsilon(1e-12));
}

TEST_CASE("v-role reflection transports the dual-density measure") {
    // int_0^s v~^{1-p'} = int_{1/s}^inf v^{1-p'}
    const double p = 2.5;
    const WeightSpec v = two_piece(1.0, -0.5, 1.0, 1.0, 3.0);
    const WeightSpec vr = v.reflected_v(p);
    const Density d(v, 1.0 - p / (p - 1.0));
    const Density dr(vr, 1.0 - p / (p - 1.0));
    for (double s : {0.2, 1.0, 3.0})
        CHECK(dr.prefix(s) == doctest::Approx(d.tail(1.0 / s)).epsilon(1e-12));
}

TEST_CASE("scaling is exact and separate from the piece data") {
    const WeightSpec w = two_piece(1.0, 0.0, 1.0, 1.0, -3.0);
    const WeightSpec w5 = w.scaled(5.0);
    CHECK(w5.scale() == doctest::Approx(5.0));
    CHECK(w5.eval(0.5) == doctest::Approx(5.0 * w.eval(0.5)));
    CHECK(w5.prefix(2.0) == doctest::Approx(5.0 * w.prefix(2.0)));
    CHECK(w5.with_unit_scale().eval(0.5) == doctest::Approx(w.eval(0.5)));
}

TEST_CASE("level points invert the primitive, leftmost under flat stretches") {
    // W(t) = t on (0,8), flat afterwards
    Piece a{0.0, 8.0, {{1.0, 0.0, 0.0, Term::Exp::none}}, false};
    Piece z{8.0, kInf, {{0.0, 0.0, 0.0, Term::Exp::none}}, false};
    const WeightSpec w({a, z});
    CHECK(w.level_point(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.level_point(4.0) == doctest::Approx(4.0).epsilon(1e-12));
    // the total mass 8 is first reached at t = 8, the left edge of the plateau
    CHECK(w.level_point(8.0) == doctest::Approx(8.0).epsilon(1e-9));
    CHECK_THROWS_AS(w.level_point(9.0), std::invalid_argument);
}

TEST_CASE("truncation clips mass and never raises values") {
    const WeightSpec w = two_piece(1.0, 0.0, 1.0, 1.0, -2.0);
    const WeightSpec wt = w.truncated(3.0);
    CHECK(wt.eval(5.0) == 0.0);
    CHECK(wt.eval(2.0) == doctest::Approx(w.eval(2.0)));
    CHECK(wt.total_mass() == doctest::Approx(w.prefix(3.0)).epsilon(1e-12));
}

TEST_CASE("exponent triple derived quantities") {
    Exponents e{2.0, 0.5};
    CHECK(e.r() == doctest::Approx(2.0 / 3.0));
    CHECK(e.p_prime() == doctest::Approx(2.0));
    CHECK(e.q_prime() == doctest::Approx(-1.0));
    CHECK(e.theta_cap(1.0) == doctest::Approx(2.0));
    CHECK(e.theta_cap(2.0) == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(e.main_regime());

    Exponents e1{1.0, 0.5};
    CHECK(std::isinf(e1.p_prime()));
    CHECK(e1.p1_regime());
    // r = pq/(p-q) = -q' when p = 1
    CHECK(e1.r() == doctest::Approx(-e1.q_prime()).epsilon(1e-14));
}
