#include <doctest.h>

#include <cmath>

#include "hb/kernel.hpp"

using namespace hb;

TEST_CASE("pointwise values of the builtin families") {
    CHECK(Kernel::riemann_liouville(1.0).eval(1.0, 3.0) == doctest::Approx(2.0));
    CHECK(Kernel::constant().eval(0.2, 7.0) == doctest::Approx(1.0));
    CHECK(Kernel::logarithmic(1.0).eval(1.0, std::exp(1.0)) == doctest::Approx(1.0));
    CHECK(Kernel::riemann_liouville(2.0).eval(1.0, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("logarithmic kernel rejects x = 0") {
    CHECK_THROWS_AS(Kernel::logarithmic(1.0).eval(0.0, 2.0), std::domain_error);
}

TEST_CASE("default declared thetas") {
    CHECK(Kernel::constant().theta() == doctest::Approx(1.0));
    CHECK(Kernel::riemann_liouville(1.0).theta() == doctest::Approx(1.0));
    CHECK(Kernel::riemann_liouville(2.0).theta() == doctest::Approx(2.0));
    CHECK(Kernel::riemann_liouville(0.5).theta() == doctest::Approx(1.0));
    CHECK(Kernel::logarithmic(3.0).theta() == doctest::Approx(4.0));
}

TEST_CASE("theta estimation") {
    // additive kernels: the triangle ratio is exactly 1
    CHECK(Kernel::riemann_liouville(1.0).estimate_theta(0.01, 100.0, 500, 42) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // the constant kernel forces theta >= 1/2
    CHECK(Kernel::constant().estimate_theta(0.01, 100.0, 200, 42) == doctest::Approx(0.5));
    // quadratic growth: the midpoint triple attains 2^{alpha-1} = 2
    const double th2 = Kernel::riemann_liouville(2.0).estimate_theta(0.01, 100.0, 2000, 42);
    CHECK(th2 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(th2 <= 2.0 + 1e-12);
}

TEST_CASE("theta estimate stays in the analytic bracket for power kernels") {
    for (double alpha : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const double expect = std::max(1.0, std::pow(2.0, alpha - 1.0));
        const double est = Kernel::riemann_liouville(alpha).estimate_theta(1e-2, 1e2, 3000, 7);
        CHECK(est <= expect * (1.0 + 1e-10));
        CHECK(est >= expect * (1.0 - 0.05));
    }
}

TEST_CASE("regularity report for declared thetas") {
    CHECK(Kernel::riemann_liouville(2.0).check_regularity(1e-2, 1e2, 400, 9).ok());
    CHECK(Kernel::constant().check_regularity(1e-2, 1e2, 400, 9).ok());
    CHECK(Kernel::logarithmic(2.0).check_regularity(1e-2, 1e2, 400, 9).ok());

    // alpha = 2 is not 1-regular: x=0,y=1,z=2 gives 4 > 1*(1+1)
    const auto bad = Kernel::riemann_liouville(2.0).with_theta(1.0).check_regularity(1e-2, 1e2, 400, 9);
    CHECK(!bad.subadditive_ok);
    CHECK(bad.worst_violation > 0.0);
}

TEST_CASE("builtin families pass their documented thetas") {
    for (double alpha : {0.5, 1.0, 2.0}) {
        CHECK(Kernel::riemann_liouville(alpha).check_regularity(1e-3, 1e3, 500, 13).ok());
        CHECK(Kernel::logarithmic(alpha).check_regularity(1e-3, 1e3, 500, 13).ok());
    }
    const WeightSpec u = WeightSpec::power(2.0, 0.5);
    CHECK(Kernel::integral_of(u).check_regularity(1e-3, 1e3, 500, 13).ok());
    CHECK(Kernel::sup_of(u).check_regularity(1e-3, 1e3, 500, 13).ok());
}

TEST_CASE("integral_of is exactly additive") {
    const Kernel k = Kernel::integral_of(WeightSpec::power(1.0, 1.0));
    const double xy = k.eval(0.5, 2.0), yz = k.eval(2.0, 8.0), xz = k.eval(0.5, 8.0);
    CHECK(xz == doctest::Approx(xy + yz).epsilon(1e-14));
    CHECK(k.estimate_theta(1e-2, 1e2, 500, 3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kernels vanish on the diagonal and at inf where expected") {
    CHECK(Kernel::riemann_liouville(1.5).eval(2.0, 2.0) == 0.0);
    CHECK(std::isinf(Kernel::riemann_liouville(1.0).eval(1.0, kInf)));
    CHECK(Kernel::constant().eval(3.0, kInf) == doctest::Approx(1.0));
    // integrable u gives a finite value at y = inf
    Piece p1{0.0, 1.0, {{1.0, 0.0, 0.0, Term::Exp::none}}, false};
    Piece p2{1.0, kInf, {{1.0, -3.0, 0.0, Term::Exp::none}}, false};
    const Kernel k = Kernel::integral_of(WeightSpec({p1, p2}));
    CHECK(k.eval(2.0, kInf) == doctest::Approx(0.5 / 4.0));
}

TEST_CASE("reflected kernel swaps and inverts arguments") {
    const Kernel k = Kernel::riemann_liouville(1.0);
    const Kernel kr = k.reflected();
    CHECK(kr.eval(0.25, 0.5) == doctest::Approx(k.eval(2.0, 4.0)));
    // reflecting twice is the identity
    CHECK(kr.reflected().eval(2.0, 4.0) == doctest::Approx(k.eval(2.0, 4.0)));
    // monotonicity and regularity are preserved
    CHECK(kr.check_regularity(1e-2, 1e2, 400, 21).ok());
}

TEST_CASE("tabulated kernel approximates its source and passes regularity") {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 24; ++i) xs.push_back(1e-3 * std::pow(1e6, i / 24.0));
    ys = xs;
    std::vector<double> vals;
    for (double x : xs)
        for (double y : ys) vals.push_back(std::max(y - x, 0.0));
    const Kernel k = Kernel::tabulated(xs, ys, vals, 1.0);
    CHECK(k.check_regularity(1e-2, 1e2, 300, 5).ok());
    CHECK(k.eval(1.0, 100.0) == doctest::Approx(99.0).epsilon(0.05));
}
