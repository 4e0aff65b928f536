#include <doctest.h>

#include <cmath>

#include "hb/quad.hpp"

using namespace hb;
using quad::QuadConfig;
using quad::QuadResult;

TEST_CASE("integrable endpoint singularity") {
    QuadConfig cfg;
    auto r = quad::integrate([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, cfg);
    CHECK(r.finite());
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("exponential tail on (0,inf)") {
    QuadConfig cfg;
    auto r = quad::integrate([](double t) { return std::exp(-t); }, 0.0, kInf, cfg);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.converged);
}

TEST_CASE("harmonic tail flagged divergent") {
    QuadConfig cfg;
    auto r = quad::integrate([](double t) { return 1.0 / t; }, 1.0, kInf, cfg);
    CHECK(std::isinf(r.value));
    CHECK(!r.divergence_reason.empty());
}

TEST_CASE("divergence toward zero") {
    QuadConfig cfg;
    auto r = quad::integrate([](double t) { return 1.0 / (t * t); }, 0.0, 1.0, cfg);
    CHECK(std::isinf(r.value));
}

TEST_CASE("linearity across nine orders of magnitude") {
    QuadConfig cfg;
    auto f = [](double t) { return std::exp(-t) * (1.0 + std::sin(3 * t) * std::sin(3 * t)); };
    const double base = quad::integrate(f, 0.0, kInf, cfg).value;
    for (double a : {1e-6, 1.0, 1e6}) {
        auto fa = [&](double t) { return a * f(t); };
        const double va = quad::integrate(fa, 0.0, kInf, cfg).value;
        CHECK(va == doctest::Approx(a * base).epsilon(cfg.rel_tol));
    }
}

TEST_CASE("additivity over a split point") {
    QuadConfig cfg;
    auto f = [](double t) { return t * std::exp(-t); };
    const double whole = quad::integrate(f, 0.5, 20.0, cfg).value;
    const double left = quad::integrate(f, 0.5, 3.0, cfg).value;
    const double right = quad::integrate(f, 3.0, 20.0, cfg).value;
    CHECK(whole == doctest::Approx(left + right).epsilon(2 * cfg.rel_tol));
}

TEST_CASE("refinement monotonicity of the error estimate") {
    QuadConfig coarse;
    coarse.rel_tol = 1e-5;
    QuadConfig fine = coarse;
    fine.rel_tol = 5e-6;
    auto f = [](double t) { return std::exp(-t) / (1.0 + t); };
    const auto rc = quad::integrate(f, 0.0, kInf, coarse);
    const auto rf = quad::integrate(f, 0.0, kInf, fine);
    CHECK(rf.err_estimate <= rc.err_estimate * (1.0 + 1e-12));
}

TEST_CASE("NaN integrand raises") {
    QuadConfig cfg;
    CHECK_THROWS_AS(quad::integrate([](double) { return kNaN; }, 0.5, 2.0, cfg),
                    std::domain_error);
}

TEST_CASE("sup of z e^{-z}") {
    QuadConfig cfg;
    auto r = quad::sup_on([](double z) { return z * std::exp(-z); }, 0.0, kInf, cfg);
    CHECK(r.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(r.argmax == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("sup of a constant") {
    QuadConfig cfg;
    auto r = quad::sup_on([](double) { return 3.25; }, 0.0, kInf, cfg);
    CHECK(r.value == doctest::Approx(3.25));
}

TEST_CASE("sup dominates every sample") {
    QuadConfig cfg;
    auto g = [](double z) { return std::exp(-std::abs(std::log(z) - 0.7)); };
    auto r = quad::sup_on(g, 0.0, kInf, cfg);
    for (int i = 0; i <= 50; ++i) {
        const double z = 1e-3 * std::pow(1e6, i / 50.0);
        CHECK(r.value >= g(z) * (1.0 - 1e-12));
    }
}

TEST_CASE("sup rising into an improper endpoint reports +inf") {
    QuadConfig cfg;
    auto r = quad::sup_on([](double z) { return std::sqrt(z); }, 1.0, kInf, cfg);
    CHECK(std::isinf(r.value));
}

TEST_CASE("sup on mirrored input is the mirrored sup") {
    QuadConfig cfg;
    auto g = [](double z) { return z * std::exp(-1.3 * z); };
    auto gm = [&](double z) { return g(1.0 / z); };
    const auto r = quad::sup_on(g, 0.5, 32.0, cfg);
    const auto rm = quad::sup_on(gm, 1.0 / 32.0, 2.0, cfg);
    CHECK(r.value == doctest::Approx(rm.value).epsilon(1e-13));
    CHECK(r.argmax == doctest::Approx(1.0 / rm.argmax).epsilon(1e-6));
}
