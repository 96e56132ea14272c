#include <doctest.h>

#include <cmath>
#include <complex>
#include <fstream>

#include <json.hpp>

#include "fekete/process.hpp"
#include "fekete/verify.hpp"

using namespace fekete;

namespace {
std::complex<double> enumerate_moment(int J, const MomentSpec& spec) {
    const uint64_t total = uint64_t{1} << (2 * J + 1);
    std::complex<double> acc(0.0, 0.0);
    for (uint64_t mask = 0; mask < total; ++mask) {
        SignPattern pat;
        pat.J = J;
        pat.signs.resize(2 * J + 1);
        for (int b = 0; b < 2 * J + 1; ++b) pat.signs[b] = (mask >> b) & 1 ? int8_t{1} : int8_t{-1};
        std::complex<double> prod(1.0, 0.0);
        for (std::size_t j = 0; j < spec.nodes.size(); ++j) {
            std::complex<double> G(0.0, 0.0);
            for (int m = -J; m <= J; ++m)
                G += static_cast<double>(pat.sign(m)) * process_coefficient(m, spec.nodes[j]);
            for (int i = 0; i < spec.r[j]; ++i) prod *= G;
            for (int i = 0; i < spec.s[j]; ++i) prod *= std::conj(G);
        }
        acc += prod;
    }
    return acc / static_cast<double>(total);
}
}  // namespace

TEST_SUITE_BEGIN("verify");

TEST_CASE("moment_rhs_exact equals full enumeration at J=3") {
    const std::vector<MomentSpec> battery = {
        {{0.37}, {1}, {1}},           {{0.37}, {2}, {0}},
        {{0.37}, {0}, {2}},           {{0.2, 0.7}, {1, 1}, {0, 0}},
        {{0.2, 0.7}, {1, 1}, {1, 1}}, {{0.3}, {2}, {2}},
        {{0.1, 0.5, 0.9}, {1, 1, 0}, {0, 1, 1}}, {{0.25, 0.75}, {2, 0}, {0, 2}},
        {{0.4}, {0}, {0}},            {{0.15, 0.6}, {1, 0}, {0, 1}},
        {{0.33}, {1}, {0}},           {{0.1, 0.9}, {1, 1}, {1, 0}},
    };
    for (const auto& spec : battery) {
        const std::complex<double> rhs = moment_rhs_exact(3, spec);
        const std::complex<double> oracle = enumerate_moment(3, spec);
        CHECK(std::abs(rhs - oracle) < 1e-12);
    }
    CHECK_THROWS_AS(moment_rhs_exact(3, MomentSpec{{0.3}, {3}, {2}}), std::domain_error);
}

TEST_CASE("degree-2 helpers agree with the moment evaluators") {
    // r=s=(1): sum |g_m|^2 is the exact second moment
    for (double t : {0.2, 0.45}) {
        const MomentSpec spec{{t}, {1}, {1}};
        CHECK(moment_rhs_exact(500, spec).real() ==
              doctest::Approx(second_moment_exact(t, 500)).epsilon(1e-13));
        CHECK(std::abs(moment_rhs_exact(500, spec).imag()) < 1e-14);
    }
}

TEST_CASE("moment_lhs is a real second moment for r=s=(1)") {
    const LegendreTable t = legendre_table(101);
    const MomentSpec spec{{0.37}, {1}, {1}};
    const std::complex<double> lhs = moment_lhs(t, spec, 2);
    CHECK(lhs.imag() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(lhs.real() >= -1e-10);
    // Parseval makes it exactly (p-1)/p at every t
    CHECK(lhs.real() == doctest::Approx(100.0 / 101.0).epsilon(1e-9));
}

TEST_CASE("moment convergence report decays") {
    const MomentSpec spec{{0.37}, {1}, {1}};
    const MomentConvergence rep = moment_convergence_report({101, 401, 1009}, 200000, spec, 2);
    REQUIRE(rep.delta.size() == 3);
    CHECK(rep.delta[2] < rep.delta[0]);
    CHECK(rep.pass);
    // degree-0 spec: delta identically 0
    const MomentConvergence zero = moment_convergence_report({101, 1009}, 100, MomentSpec{{0.3}, {0}, {0}}, 2);
    CHECK(zero.pass);
    CHECK(zero.delta[0] < 1e-14);
}

TEST_CASE("approximation gap") {
    const std::vector<double> nodes = {0.0, 0.1, 0.25, 0.37, 0.5, 0.63, 0.9, 1.0};
    const ApproxGapReport a = approximation_gap(101, nodes);
    CHECK(a.p_gap.front() == 0.0);  // t = 0
    CHECK(a.p_gap.back() == 0.0);   // t = 1
    CHECK(a.max_p_gap > 0.0);
    const ApproxGapReport b = approximation_gap(401, nodes);
    const double ratio = std::max(a.max_p_gap, b.max_p_gap) / std::min(a.max_p_gap, b.max_p_gap);
    CHECK(ratio <= 4.0);
}

TEST_CASE("tightness ratio is bounded and scale-stable") {
    const TightnessReport r101 = tightness_ratio(legendre_table(101), 150, 17, 2);
    CHECK(r101.max_ratio > 0.0);
    CHECK(std::isfinite(r101.max_ratio));
    const TightnessReport r401 = tightness_ratio(legendre_table(401), 150, 17, 2);
    const double ratio = std::max(r101.max_ratio, r401.max_ratio) /
                         std::min(r101.max_ratio, r401.max_ratio);
    CHECK(ratio <= 3.0);
    CHECK_THROWS_AS(tightness_ratio(legendre_table(101), 10, 1, 1), std::domain_error);
}

TEST_CASE("derivative truncation gaps shrink with p") {
    const double g1a = deriv_gap(legendre_table(101), 1, 2);
    const double g1b = deriv_gap(legendre_table(1009), 1, 2);
    CHECK(g1b <= 1.5 * g1a);
    const double g2a = deriv_gap(legendre_table(101), 2, 2);
    const double g2b = deriv_gap(legendre_table(1009), 2, 2);
    CHECK(g2b <= 1.5 * g2a);
    CHECK_THROWS_AS(deriv_gap(legendre_table(101), 3, 1), std::domain_error);
}

TEST_CASE("single-term Taylor gap matches the kernel expansion") {
    // m=0 term at t=0.5: pi^2/(p^2 sin^2(pi t/p)) = 1/t^2 + O(1/p^2)
    const double p = 1009.0;
    const double t = 0.5;
    const double kernel = std::pow(std::numbers::pi / p, 2.0) /
                          std::pow(std::sin(std::numbers::pi * (0.0 - t) / p), 2.0);
    CHECK(std::abs(kernel - 1.0 / (t * t)) < 20.0 / (p * p));
}

TEST_CASE("log truncation scalings at desk scale") {
    QuadConfig cfg;
    cfg.nodes = 16;
    const std::vector<double> eps = {1e-1, 1e-2, 1e-3};
    const TruncationReport fek = log_truncation_fekete(legendre_table(149), eps, cfg, 2);
    CHECK(fek.interior_exponent >= 6.0 / 25.0 - 0.05);
    double cmax = 0.0, cmin = 1e300;
    for (double c : fek.boundary_constant) {
        cmax = std::max(cmax, c);
        cmin = std::min(cmin, c);
    }
    CHECK(cmax / cmin <= 4.0);

    const TruncationReport proc = log_truncation_process(50, 40, 23, eps, cfg, 2);
    CHECK(proc.interior_exponent >= 6.0 / 25.0 - 0.05);
}

TEST_CASE("sup norms: Gauss lower bound and Bernstein") {
    const SupNormReport rep = sup_norm_report(legendre_table(101), 2);
    CHECK(rep.sup_F >= std::sqrt(101.0) - 1e-9);
    CHECK(rep.sup_dF <= 101.0 * rep.sup_F * (1.0 + 1e-3));
}

TEST_CASE("distribution compare at desk scale") {
    const LegendreTable t = legendre_table(101);
    const DistReport rep = distribution_compare(t, default_rectangles(), 50, 20000, 40, 3, 2);
    REQUIRE(rep.gap.size() == 12);
    CHECK(rep.max_gap <= 0.1);
    // everything-rectangle: both sides essentially 1 (Chebyshev at radius 10)
    CHECK(rep.empirical.back() >= 0.99);
    CHECK(rep.process.back() >= 0.99);
    // U vs -U symmetry of the process side within Monte Carlo error
    CHECK(std::abs(rep.process[2] - rep.process[3]) <= 0.02);
    CHECK(std::abs(rep.process[4] - rep.process[5]) <= 0.02);
}

TEST_CASE("default rectangles match the versioned config") {
    std::ifstream in(std::string(FEKETE_CONFIG_DIR) + "/rectangles.json");
    REQUIRE(in.good());
    nlohmann::json j;
    in >> j;
    const std::vector<Rectangle> rects = default_rectangles();
    REQUIRE(j.size() == rects.size());
    for (std::size_t i = 0; i < rects.size(); ++i) {
        CHECK(j[i]["re_lo"].get<double>() == rects[i].re_lo);
        CHECK(j[i]["re_hi"].get<double>() == rects[i].re_hi);
        CHECK(j[i]["im_lo"].get<double>() == rects[i].im_lo);
        CHECK(j[i]["im_hi"].get<double>() == rects[i].im_hi);
    }
}

TEST_SUITE_END();
