#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fekete/arith.hpp"
#include "fekete/eval.hpp"
#include "fekete/quad.hpp"

using namespace fekete;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE_BEGIN("quad");

TEST_CASE("bracket_zeros finds the cotangent zero") {
    auto f = [](double t) { return kPi / std::tan(kPi * t); };
    const auto zeros = bracket_zeros(f, 0.01, 0.99, 64);
    REQUIRE(zeros.size() == 1);
    const ZeroBracket& z = zeros[0];
    CHECK(z.root == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(z.slope == doctest::Approx(-kPi * kPi).epsilon(1e-4));
    CHECK(z.hi - z.lo <= 1e-12);
    CHECK(f(z.lo) * f(z.hi) < 0.0);
    CHECK(std::abs(f(z.root)) <= 1e-10 * std::abs(z.slope));
}

TEST_CASE("bracket_zeros on a sign-definite function is empty") {
    const auto zeros = bracket_zeros([](double t) { return t - 2.0; }, 0.0, 1.0, 32);
    CHECK(zeros.empty());
}

TEST_CASE("bracket_zeros scan preconditions") {
    CHECK_THROWS_AS(bracket_zeros([](double t) { return t; }, 0.0, 1.0, 8), std::domain_error);
    CHECK_THROWS_AS(bracket_zeros([](double) { return std::nan(""); }, 0.0, 1.0, 32),
                    std::runtime_error);
}

TEST_CASE("arc_H zeros for p=5 match the factorization") {
    // F_5 = z (1-z)^2 (1+z): the only interior circle zero is z = -1, which
    // lives on arc k=2 at t=0.5.
    const LegendreTable t5 = legendre_table(5);
    const ArcFunction arc(t5, 2);
    const auto zeros =
        bracket_zeros([&](double t) { return arc.H(t); }, 0.01, 0.99, 64,
                      [&](double t) { return arc.H_deriv(t, 1); });
    REQUIRE(zeros.size() == 1);
    CHECK(zeros[0].root == doctest::Approx(0.5).epsilon(1e-10));
    for (uint64_t k : {1ull, 3ull}) {
        const ArcFunction a(t5, k);
        CHECK(bracket_zeros([&](double t) { return a.H(t); }, 0.01, 0.99, 64).empty());
    }
}

TEST_CASE("degenerate zero is reported, never skipped") {
    auto cubic = [](double t) {
        const double d = t - 0.5;
        return d * d * d;
    };
    CHECK_THROWS_AS(bracket_zeros(cubic, 0.0, 1.0, 33), DegenerateZero);
}

TEST_CASE("integrate_log_abs closed forms") {
    QuadConfig cfg;

    SUBCASE("Mahler measure of z-1 is 1") {
        LogIntegrand fn;
        fn.f = [](double t) { return std::abs(unit_e(t) - 1.0); };
        fn.left = EndpointKind::zero;
        fn.right = EndpointKind::zero;
        const LogIntegral li = integrate_log_abs(fn, 0.0, 1.0, {}, cfg);
        CHECK(std::abs(li.value) < 1e-9);
    }

    SUBCASE("same integral via 2 sin(pi t)") {
        LogIntegrand fn;
        fn.f = [](double t) { return 2.0 * std::sin(kPi * t); };
        fn.left = EndpointKind::zero;
        fn.right = EndpointKind::zero;
        const LogIntegral li = integrate_log_abs(fn, 0.0, 1.0, {}, cfg);
        CHECK(std::abs(li.value) < 1e-9);
    }

    SUBCASE("interior zero: log|t - 1/2|") {
        LogIntegrand fn;
        fn.f = [](double t) { return t - 0.5; };
        fn.df = [](double) { return 1.0; };
        const auto zeros = bracket_zeros(fn.f, 0.0, 1.0, 33, fn.df);
        const LogIntegral li = integrate_log_abs(fn, 0.0, 1.0, zeros, cfg);
        CHECK(li.value == doctest::Approx(-1.0 - std::log(2.0)).epsilon(1e-10));
        REQUIRE(li.zeros.size() == 1);
    }

    SUBCASE("poles at both ends plus an interior zero: pi cot(pi t)") {
        // int_0^1 log|pi cot(pi t)| dt = log(pi)
        LogIntegrand fn;
        fn.f = [](double t) { return kPi / std::tan(kPi * t); };
        fn.df = [](double t) {
            const double s = std::sin(kPi * t);
            return -kPi * kPi / (s * s);
        };
        fn.left = EndpointKind::pole;
        fn.right = EndpointKind::pole;
        const auto zeros = bracket_zeros(fn.f, 0.01, 0.99, 65, fn.df);
        const LogIntegral li = integrate_log_abs(fn, 0.0, 1.0, zeros, cfg);
        CHECK(li.value == doctest::Approx(std::log(kPi)).epsilon(1e-9));
    }
}

TEST_CASE("error estimate bounds the effect of doubling the order") {
    QuadConfig cfg;
    LogIntegrand fn;
    fn.f = [](double t) { return (t - 0.5) * (2.0 + std::sin(7.0 * t)); };
    fn.df = [](double t) { return 2.0 + std::sin(7.0 * t) + (t - 0.5) * 7.0 * std::cos(7.0 * t); };
    const auto zeros = bracket_zeros(fn.f, 0.0, 1.0, 65, fn.df);
    const LogIntegral a = integrate_log_abs(fn, 0.0, 1.0, zeros, cfg);
    QuadConfig cfg2 = cfg;
    cfg2.nodes = 2 * cfg.nodes;
    cfg2.local_nodes = 2 * cfg.local_nodes;
    const LogIntegral b = integrate_log_abs(fn, 0.0, 1.0, zeros, cfg2);
    CHECK(std::abs(a.value - b.value) <= 2.0 * a.error_estimate + 1e-12);
}

TEST_CASE("integrate_log_unit agrees with the generic path") {
    QuadConfig cfg;
    const UnitMesh mesh = build_unit_mesh(cfg);
    LogIntegrand fn;
    fn.f = [](double t) { return kPi / std::tan(kPi * t); };
    fn.df = [](double t) {
        const double s = std::sin(kPi * t);
        return -kPi * kPi / (s * s);
    };
    fn.left = EndpointKind::pole;
    fn.right = EndpointKind::pole;
    const LogIntegral li = integrate_log_unit(fn, mesh, {}, cfg);
    CHECK(li.value == doctest::Approx(std::log(kPi)).epsilon(1e-9));
    REQUIRE(li.zeros.size() == 1);
    CHECK(li.zeros[0].root == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("mahler_fekete exact small cases") {
    QuadConfig cfg;
    // F_3 = z - z^2 = z(1-z): M_0 = 1, so M_0/sqrt(3) = 1/sqrt(3).
    const MahlerResult m3 = mahler_fekete(legendre_table(3), cfg, 2);
    CHECK(m3.estimate.value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
    // F_5 = z(1-z)^2(1+z): M_0 = 1.
    const MahlerResult m5 = mahler_fekete(legendre_table(5), cfg, 2);
    CHECK(m5.estimate.value == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-6));
    CHECK(m5.estimate.std_error == 0.0);
    CHECK(m5.estimate.n_samples == 5);
}

TEST_CASE("doubling the order moves mahler by at most twice the estimate") {
    QuadConfig cfg;
    cfg.nodes = 16;
    cfg.local_nodes = 8;
    const LegendreTable t = legendre_table(101);
    const MahlerResult a = mahler_fekete(t, cfg, 2);
    QuadConfig cfg2;
    cfg2.nodes = 32;
    cfg2.local_nodes = 16;
    const MahlerResult b = mahler_fekete(t, cfg2, 2);
    CHECK(std::abs(a.estimate.value - b.estimate.value) <= 2.0 * a.error_estimate + 1e-12);
}

TEST_CASE("per-arc integrals respect the reflection symmetry") {
    const LegendreTable t = legendre_table(13);
    QuadConfig cfg;
    const UnitMesh mesh = build_unit_mesh(cfg);
    auto arc_integral = [&](uint64_t k) {
        const ArcFunction arc(t, k);
        LogIntegrand fn;
        fn.f = [&arc](double x) { return arc.H(x); };
        fn.df = [&arc](double x) { return arc.H_deriv(x, 1); };
        fn.left = k == 0 ? EndpointKind::zero : EndpointKind::pole;   // 13 = 1 (mod 4)
        fn.right = k == 12 ? EndpointKind::zero : EndpointKind::pole;
        return integrate_log_unit(fn, mesh, {}, cfg).value;
    };
    for (uint64_t k : {0ull, 2ull, 5ull}) {
        CHECK(arc_integral(k) == doctest::Approx(arc_integral(12 - k)).epsilon(1e-7));
    }
}

TEST_CASE("lq_norm_fekete") {
    QuadConfig cfg;
    SUBCASE("q=2 is Parseval, exactly") {
        for (uint64_t p : {101ull, 1009ull}) {
            const LqResult r = lq_norm_fekete(legendre_table(p), 2.0, cfg, 2);
            const double expect = std::sqrt(static_cast<double>(p - 1) / static_cast<double>(p));
            CHECK(std::abs(r.estimate.value - expect) < 1e-8);
        }
    }
    SUBCASE("q=4 at p=5 from the autocorrelation power sum") {
        // ||F_5||_4^4 = 16 + 2(1+4+1) = 28 for coefficients (1,-1,-1,1)
        const LqResult r = lq_norm_fekete(legendre_table(5), 4.0, cfg, 2);
        CHECK(r.estimate.value == doctest::Approx(std::pow(28.0, 0.25) / std::sqrt(5.0)).epsilon(1e-8));
    }
    SUBCASE("monotone in q, and M_0 <= M_2") {
        const LegendreTable t = legendre_table(101);
        double prev = 0.0;
        for (double q : {0.5, 1.0, 2.0, 4.0}) {
            const double v = lq_norm_fekete(t, q, cfg, 2).estimate.value;
            CHECK(v >= prev - 1e-9);
            prev = v;
        }
        const double m0 = mahler_fekete(t, cfg, 2).estimate.value;
        CHECK(m0 <= lq_norm_fekete(t, 2.0, cfg, 2).estimate.value + 1e-9);
    }
    CHECK_THROWS_AS(lq_norm_fekete(legendre_table(5), 0.0, cfg, 1), std::domain_error);
}

TEST_CASE("circle_zero_count small cases") {
    QuadConfig cfg;
    const ZeroCountResult r3 = circle_zero_count(legendre_table(3), cfg, 2);
    CHECK(r3.count == 1);  // only z = 1
    const ZeroCountResult r5 = circle_zero_count(legendre_table(5), cfg, 2);
    CHECK(r5.endpoint_zeros == 1);  // double zero at z=1 counted once
    CHECK(r5.count == 2);           // plus the sign change at z=-1
    const ZeroCountResult r101 = circle_zero_count(legendre_table(101), cfg, 2);
    CHECK(r101.ratio > 0.3);
    CHECK(r101.ratio < 0.7);
}

TEST_SUITE_END();
