#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fekete/arith.hpp"
#include "fekete/eval.hpp"
#include "fekete/util/rng.hpp"

using namespace fekete;
using cplxd = std::complex<double>;

TEST_SUITE_BEGIN("eval");

TEST_CASE("fekete_horner basics") {
    for (uint64_t p : {5ull, 101ull, 1009ull}) {
        const LegendreTable t = legendre_table(p);
        CHECK(std::abs(fekete_horner(t, {1.0, 0.0})) < 1e-10 * static_cast<double>(p));
    }
    const LegendreTable t5 = legendre_table(5);
    // coefficient signs of F_5 are (1,-1,-1,1)
    CHECK(t5.symbols[1] == 1);
    CHECK(t5.symbols[2] == -1);
    CHECK(t5.symbols[3] == -1);
    CHECK(t5.symbols[4] == 1);
    CHECK(std::abs(fekete_horner(t5, unit_e(0.2)) - cplxd(std::sqrt(5.0), 0.0)) < 1e-12 * 10);
    CHECK(std::abs(fekete_horner(t5, {-1.0, 0.0})) < 1e-12);
    CHECK_THROWS_AS(fekete_horner(t5, {0.5, 0.0}), std::domain_error);
}

TEST_CASE("fekete_grid equals the Horner oracle") {
    const LegendreTable t = legendre_table(101);
    const double tol = 1e-9 * std::sqrt(101.0) * std::log(101.0);
    const auto grid = fekete_grid(t, 0.3);
    for (int i = 0; i < 16; ++i) {
        const uint64_t k = counter_word(11, 0, i) % 101;
        const cplxd oracle = fekete_horner(t, unit_e((static_cast<double>(k) + 0.3) / 101.0));
        CHECK(std::abs(grid[k] - oracle) < tol);
    }
}

TEST_CASE("fekete_grid shift identity at t=1 and Gauss point at t=0") {
    const LegendreTable t = legendre_table(101);
    const auto g0 = fekete_grid(t, 0.0);
    const auto g1 = fekete_grid(t, 1.0);
    for (uint64_t k = 0; k < 101; ++k) {
        CHECK(std::abs(g1[k] - g0[(k + 1) % 101]) < 1e-9 * std::sqrt(101.0));
    }
    CHECK(std::abs(g0[1] - gauss_sum(t)) < 1e-9 * std::sqrt(101.0));
}

TEST_CASE("PhaseGrid validation") {
    PhaseGrid g;
    g.p = 101;
    g.offsets = {0.1, 0.5, 0.9};
    CHECK_NOTHROW(g.validate());
    g.offsets = {0.5, 0.1};
    CHECK_THROWS_AS(g.validate(), std::domain_error);
    g.offsets = {0.5, 1.5};
    CHECK_THROWS_AS(g.validate(), std::domain_error);
}

TEST_CASE("arc G matches the polynomial ratio") {
    const LegendreTable t = legendre_table(101);
    const cplxd g = gauss_sum(t);

    const ArcFunction a1(t, 1);
    CHECK(std::abs(a1.G(0.0) - cplxd(1.0, 0.0)) < 1e-12);

    const ArcFunction a7(t, 7);
    const cplxd lhs = a7.G(0.4);
    const cplxd rhs = fekete_horner(t, unit_e((7.0 + 0.4) / 101.0)) / g;
    CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(rhs));

    CHECK_THROWS_AS(a7.G(1.5), std::domain_error);
}

TEST_CASE("arc G second moment is near 1") {
    const LegendreTable t = legendre_table(1009);
    const cplxd g = gauss_sum(t);
    const auto grid = fekete_grid(t, 0.37);
    double acc = 0.0;
    for (uint64_t k = 0; k < 1009; ++k) acc += std::norm(grid[k] / g);
    CHECK(std::abs(acc / 1009.0 - 1.0) < 0.15);
}

TEST_CASE("arc H agrees with the complex form and is real") {
    const LegendreTable t = legendre_table(101);
    const cplxd g = gauss_sum(t);
    const double sumabs = 101.0;  // sum of |coefficients| of F_p is p-1
    for (int i = 0; i < 100; ++i) {
        const uint64_t k = counter_word(21, 0, i) % 101;
        const double tt = 0.01 + 0.98 * counter_uniform(22, 0, i);
        const ArcFunction arc(t, k);
        const cplxd F = fekete_horner(t, unit_e((static_cast<double>(k) + tt) / 101.0));
        const cplxd complex_form = cplxd(0.0, 2.0 * std::numbers::pi) * (F / g) / (unit_e(tt) - 1.0);
        CHECK(std::abs(arc.H(tt) - complex_form.real()) <= 1e-8);
        CHECK(std::abs(complex_form.imag()) <= 1e-8 * sumabs);
    }
}

TEST_CASE("arc H derivatives match finite differences") {
    const LegendreTable t = legendre_table(101);
    const ArcFunction arc(t, 13);
    const double h = 1e-5;
    for (double tt : {0.21, 0.48, 0.77}) {
        const double fd1 = (arc.H(tt + h) - arc.H(tt - h)) / (2.0 * h);
        CHECK(arc.H_deriv(tt, 1) == doctest::Approx(fd1).epsilon(1e-5));
        const double fd2 = (arc.H_deriv(tt + h, 1) - arc.H_deriv(tt - h, 1)) / (2.0 * h);
        CHECK(arc.H_deriv(tt, 2) == doctest::Approx(fd2).epsilon(1e-4));
    }
    CHECK_THROWS_AS(arc.H_deriv(0.5, 3), std::domain_error);
    CHECK_THROWS_AS(arc.H(0.0), std::domain_error);
}

TEST_CASE("conjugate symmetry of |F_p| on the circle") {
    const LegendreTable t = legendre_table(101);
    for (double tt : {0.1, 0.23, 0.4}) {
        const double a = std::abs(fekete_horner(t, unit_e(tt)));
        const double b = std::abs(fekete_horner(t, unit_e(1.0 - tt)));
        CHECK(std::abs(a - b) < 1e-9 * std::sqrt(101.0));
    }
}

TEST_CASE("Parseval on the 4p grid") {
    for (uint64_t p : {101ull, 1009ull}) {
        const LegendreTable t = legendre_table(p);
        const FeketeGridPlan plan(t);
        double sum = 0.0;
        for (int r = 0; r < 4; ++r) {
            const auto row = plan.eval(r / 4.0);
            for (const auto& z : row) sum += std::norm(z);
        }
        const double mean = sum / (4.0 * static_cast<double>(p));
        CHECK(std::abs(mean - static_cast<double>(p - 1)) < 1e-6 * static_cast<double>(p));
    }
}

TEST_SUITE_END();
