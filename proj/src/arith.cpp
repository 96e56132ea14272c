#include "fekete/arith.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace fekete {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime(uint64_t n) {
    if (n < 2) throw std::domain_error("is_prime: n must be >= 2");
    for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // The first twelve primes are a deterministic witness set below 3.3e24,
    // which covers the whole 64-bit range.
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

LegendreTable legendre_table(uint64_t p) {
    if (p < 3 || p % 2 == 0 || !is_prime(p)) throw std::domain_error("legendre_table: p must be an odd prime");
    LegendreTable t;
    t.p = p;
    t.symbols.assign(p, int8_t{-1});
    t.symbols[0] = 0;
    for (uint64_t k = 1; k <= (p - 1) / 2; ++k) {
        t.symbols[static_cast<std::size_t>(mulmod(k, k, p))] = 1;
    }
    return t;
}

std::complex<double> gauss_sum(const LegendreTable& table) {
    const double p = static_cast<double>(table.p);
    std::complex<double> s(0.0, 0.0);
    for (uint64_t n = 1; n < table.p; ++n) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(n) / p;
        s += static_cast<double>(table.symbols[n]) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
}

int64_t quadratic_correlation(const LegendreTable& table, int64_t n) {
    const int64_t p = static_cast<int64_t>(table.p);
    int64_t nn = n % p;
    if (nn < 0) nn += p;
    int64_t acc = 0;
    for (int64_t k = 1; k <= p; ++k) {
        const int64_t a = k % p;
        const int64_t b = (k + nn) % p;
        acc += static_cast<int64_t>(table.symbols[a]) * static_cast<int64_t>(table.symbols[b]);
    }
    return acc;
}

void save_table(const LegendreTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_table: cannot open " + path);
    out.write("FKLT", 4);
    const uint32_t version = 1;
    unsigned char buf[8];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((version >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(buf), 4);
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((table.p >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(buf), 8);
    std::vector<unsigned char> bytes(table.p);
    for (uint64_t n = 0; n < table.p; ++n) {
        const int8_t s = table.symbols[n];
        bytes[n] = s == 0 ? 0x00 : (s > 0 ? 0x01 : 0xFF);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("save_table: write failed for " + path);
}

LegendreTable load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_table: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FKLT", 4) != 0) throw std::runtime_error("load_table: bad magic in " + path);
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 4);
    uint32_t version = 0;
    for (int i = 0; i < 4; ++i) version |= static_cast<uint32_t>(buf[i]) << (8 * i);
    if (!in || version != 1) throw std::runtime_error("load_table: unsupported version in " + path);
    in.read(reinterpret_cast<char*>(buf), 8);
    uint64_t p = 0;
    for (int i = 0; i < 8; ++i) p |= static_cast<uint64_t>(buf[i]) << (8 * i);
    if (!in || p < 3) throw std::runtime_error("load_table: bad modulus in " + path);
    LegendreTable t;
    t.p = p;
    t.symbols.resize(p);
    std::vector<unsigned char> bytes(p);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(p));
    if (!in) throw std::runtime_error("load_table: truncated file " + path);
    for (uint64_t n = 0; n < p; ++n) {
        t.symbols[n] = bytes[n] == 0x00 ? 0 : (bytes[n] == 0x01 ? 1 : -1);
    }
    return t;
}

}  // namespace fekete
