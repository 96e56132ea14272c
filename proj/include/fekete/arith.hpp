#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace fekete {

// Deterministic Miller-Rabin, valid for all n < 2^63. Throws std::domain_error
// for n < 2.
bool is_prime(uint64_t n);

// Precomputed Legendre symbols (n/p) for one odd prime p. Immutable after
// construction; downstream hot loops index `symbols` directly.
struct LegendreTable {
    uint64_t p = 0;
    std::vector<int8_t> symbols;  // symbols[n] = (n/p), n = 0..p-1

    // (n/p) for any integer n (reduced mod p).
    int sign(int64_t n) const {
        int64_t r = n % static_cast<int64_t>(p);
        if (r < 0) r += static_cast<int64_t>(p);
        return symbols[static_cast<std::size_t>(r)];
    }
};

// O(p) construction via one pass over the quadratic residues k^2 mod p.
// Throws std::domain_error unless p is an odd prime.
LegendreTable legendre_table(uint64_t p);

// sum_{n=1}^{p} (n/p) e(n/p); equals sqrt(p) for p = 1 (mod 4) and
// i*sqrt(p) for p = 3 (mod 4).
std::complex<double> gauss_sum(const LegendreTable& table);

// sum_{k=1}^{p} ((k(k+n))/p), exact in integer arithmetic:
// p-1 when p | n, otherwise -1.
int64_t quadratic_correlation(const LegendreTable& table, int64_t n);

// Cache file: magic "FKLT", u32-le version (=1), u64-le p, then p bytes with
// 0x00 / 0x01 / 0xFF for 0 / +1 / -1.
void save_table(const LegendreTable& table, const std::string& path);
LegendreTable load_table(const std::string& path);

}  // namespace fekete
