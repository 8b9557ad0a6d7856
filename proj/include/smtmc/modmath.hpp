#pragma once

#include <bit>
#include <cstdint>
#include <span>

#include "smtmc/error.hpp"

namespace smtmc {

// Bits needed to represent value-1 values, i.e. ceil(log2 value).
inline uint32_t ceil_log2(uint64_t value) {
    if (value <= 1) return 0;
    return 64 - (uint32_t)std::countl_zero(value - 1);
}

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((unsigned __int128)a * b % m);
}

inline uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin. The witness set is complete below 3.3e24, so
// the answer is exact for the whole uint64_t range.
inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
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

struct Prime {
    uint64_t value = 2;
    uint32_t width_hint = 1;  // bits needed, ceil(log2 value)
};

inline Prime make_prime(uint64_t value) { return Prime{value, ceil_log2(value)}; }

// Least prime p >= n. By Bertrand's postulate p < 2n.
inline Prime smallest_prime_geq(uint64_t n) {
    constexpr uint64_t kLargest64BitPrime = 18446744073709551557ull;
    if (n < 2 || n > kLargest64BitPrime) throw Error("smallest_prime_geq: argument out of supported range");
    if (n <= 2) return make_prime(2);
    uint64_t c = n | 1;  // first odd >= n
    while (!is_prime(c)) c += 2;
    return make_prime(c);
}

// (sum coeffs[i]*values[i] + offset) mod p, computed exactly. Coefficients and
// offset must already be in Z_p; values are arbitrary nonnegative words.
inline uint64_t mod_linear_eval(std::span<const uint64_t> coeffs, std::span<const uint64_t> values,
                                uint64_t offset, const Prime& p) {
    if (coeffs.size() != values.size())
        throw Error("mod_linear_eval: coefficient/value length mismatch");
    if (offset >= p.value) throw Error("mod_linear_eval: offset out of range");
    uint64_t acc = offset;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] >= p.value) throw Error("mod_linear_eval: coefficient out of range");
        acc = (acc + mulmod(coeffs[i], values[i] % p.value, p.value)) % p.value;
    }
    return acc;
}

}  // namespace smtmc
