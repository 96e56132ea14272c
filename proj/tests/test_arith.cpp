#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "fekete/arith.hpp"
#include "fekete/util/rng.hpp"

using namespace fekete;

namespace {
// Independent oracle: trial division.
bool trial_division_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}
}  // namespace

TEST_SUITE_BEGIN("arith");

TEST_CASE("is_prime basics and trial-division oracle") {
    CHECK(is_prime(2));
    CHECK(is_prime(100003));
    CHECK_FALSE(is_prime(100001));  // 11 * 9091
    CHECK_THROWS_AS(is_prime(1), std::domain_error);
    CHECK_THROWS_AS(is_prime(0), std::domain_error);
    for (uint64_t n = 2; n < 4000; ++n) CHECK(is_prime(n) == trial_division_prime(n));
    // a few larger spot checks against the oracle
    for (uint64_t n : {99991ull, 99989ull, 100003ull, 1000003ull, 1000033ull, 1000037ull, 999983ull})
        CHECK(is_prime(n) == trial_division_prime(n));
}

TEST_CASE("legendre_table entries and invariants") {
    const LegendreTable t7 = legendre_table(7);
    CHECK(t7.symbols[3] == -1);  // Euler: 3^3 = 27 = -1 (mod 7)
    CHECK(t7.symbols[1] == 1);
    CHECK(t7.symbols[0] == 0);

    CHECK_THROWS_AS(legendre_table(15), std::domain_error);
    CHECK_THROWS_AS(legendre_table(8), std::domain_error);

    for (uint64_t p : {7ull, 101ull, 499ull}) {
        const LegendreTable t = legendre_table(p);
        int64_t plus = 0, minus = 0;
        for (uint64_t n = 1; n < p; ++n) (t.symbols[n] > 0 ? plus : minus)++;
        CHECK(plus == static_cast<int64_t>((p - 1) / 2));
        CHECK(minus == static_cast<int64_t>((p - 1) / 2));
        // Euler criterion on every entry
        for (uint64_t n = 1; n < p; ++n) {
            uint64_t e = 1;
            for (uint64_t i = 0; i < (p - 1) / 2; ++i) e = e * n % p;
            const int euler = e == 1 ? 1 : -1;
            CHECK(t.symbols[n] == euler);
        }
        // multiplicativity on random pairs
        for (int i = 0; i < 10000; ++i) {
            const uint64_t a = 1 + counter_word(3, p, 2 * i) % (p - 1);
            const uint64_t b = 1 + counter_word(3, p, 2 * i + 1) % (p - 1);
            CHECK(t.symbols[a * b % p] == t.symbols[a] * t.symbols[b]);
        }
    }
}

TEST_CASE("gauss_sum closed form") {
    const double s5 = std::abs(gauss_sum(legendre_table(5)) - std::complex<double>(std::sqrt(5.0), 0.0));
    CHECK(s5 < 1e-9 * std::sqrt(5.0));
    const double s7 = std::abs(gauss_sum(legendre_table(7)) - std::complex<double>(0.0, std::sqrt(7.0)));
    CHECK(s7 < 1e-9 * std::sqrt(7.0));

    for (uint64_t p = 3; p < 200; p += 2) {
        if (!is_prime(p)) continue;
        const std::complex<double> g = gauss_sum(legendre_table(p));
        CHECK(std::abs(std::norm(g) - static_cast<double>(p)) < 1e-8 * static_cast<double>(p));
        const double sq = std::sqrt(static_cast<double>(p));
        const std::complex<double> expect =
            p % 4 == 1 ? std::complex<double>(sq, 0.0) : std::complex<double>(0.0, sq);
        CHECK(std::abs(g - expect) < 1e-9 * sq);
    }
}

TEST_CASE("quadratic_correlation matches the closed form") {
    const LegendreTable t11 = legendre_table(11);
    CHECK(quadratic_correlation(t11, 0) == 10);
    CHECK(quadratic_correlation(t11, 3) == -1);
    const LegendreTable t7 = legendre_table(7);
    CHECK(quadratic_correlation(t7, 14) == 6);  // p | n with n a nonzero multiple

    for (uint64_t p : {3ull, 5ull, 31ull, 101ull}) {
        const LegendreTable t = legendre_table(p);
        for (uint64_t n = 0; n < p; ++n) {
            const int64_t expect = n == 0 ? static_cast<int64_t>(p) - 1 : -1;
            CHECK(quadratic_correlation(t, static_cast<int64_t>(n)) == expect);
        }
    }
}

TEST_CASE("cache file format is bit-exact") {
    const LegendreTable t7 = legendre_table(7);
    const std::string path = "/tmp/fekete_test_table_7.bin";
    save_table(t7, path);

    std::ifstream in(path, std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    // "FKLT", version 1 (u32 le), p = 7 (u64 le), symbols for n = 0..6:
    // 0, +1, +1, -1, +1, -1, -1  (QRs mod 7 are 1, 2, 4)
    const std::vector<unsigned char> expect = {'F',  'K',  'L',  'T',  0x01, 0x00, 0x00, 0x00,
                                               0x07, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
                                               0x00, 0x01, 0x01, 0xFF, 0x01, 0xFF, 0xFF};
    CHECK(bytes == expect);

    const LegendreTable t101 = legendre_table(101);
    save_table(t101, "/tmp/fekete_test_table_101.bin");
    const LegendreTable back = load_table("/tmp/fekete_test_table_101.bin");
    CHECK(back.p == t101.p);
    CHECK(back.symbols == t101.symbols);
    std::remove(path.c_str());
    std::remove("/tmp/fekete_test_table_101.bin");
}

TEST_SUITE_END();
