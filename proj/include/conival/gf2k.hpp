#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conival/errors.hpp"

namespace conival {

// Arithmetic for GF(2^k), k <= 16.  Elements are bitmasks over the
// polynomial basis; the modulus is the lexicographically smallest monic
// irreducible of degree k, found once by trial division.
namespace gf2k {

inline int poly_deg(uint64_t p) {
    int d = -1;
    while (p) { ++d; p >>= 1; }
    return d;
}

inline uint64_t poly_mod(uint64_t a, uint64_t m) {
    int dm = poly_deg(m);
    int da = poly_deg(a);
    while (da >= dm) {
        a ^= m << (da - dm);
        da = poly_deg(a);
    }
    return a;
}

inline uint64_t poly_mul_mod(uint64_t a, uint64_t b, uint64_t m) {
    uint64_t acc = 0;
    b = poly_mod(b, m);
    while (a) {
        if (a & 1) acc ^= b;
        a >>= 1;
        b <<= 1;
        b = poly_mod(b, m);
    }
    return poly_mod(acc, m);
}

inline bool poly_irreducible(uint64_t p) {
    int d = poly_deg(p);
    if (d <= 0) return false;
    if (d == 1) return true;
    if (!(p & 1)) return false; // divisible by x
    // trial division by all polynomials of degree 1..d/2
    for (int e = 1; 2 * e <= d; ++e) {
        for (uint64_t q = (1ull << e) | 1; q < (2ull << e); q += 2) {
            if (poly_deg(q) != e) continue;
            if (poly_mod(p, q) == 0) return false;
        }
    }
    return true;
}

// Smallest irreducible monic polynomial of degree k (bitmask incl. top bit).
inline uint64_t modulus_for(int k) {
    if (k < 1 || k > 16) throw Unsupported("gf(2^k) supports 1 <= k <= 16, got k=" + std::to_string(k));
    static uint64_t cache[17] = {0};
    if (cache[k]) return cache[k];
    for (uint64_t p = (1ull << k) | 1; p < (2ull << k); p += 2) {
        if (poly_irreducible(p)) { cache[k] = p; return p; }
    }
    throw InternalError("no irreducible polynomial found");
}

inline uint32_t mul(uint32_t a, uint32_t b, int k) {
    if (k == 1) return a & b;
    return static_cast<uint32_t>(poly_mul_mod(a, b, modulus_for(k)));
}

inline uint32_t pow(uint32_t a, uint64_t e, int k) {
    uint32_t r = 1;
    while (e) {
        if (e & 1) r = mul(r, a, k);
        a = mul(a, a, k);
        e >>= 1;
    }
    return r;
}

inline uint32_t inv(uint32_t a, int k) {
    if (a == 0) throw NotInvertible("zero in gf(2^" + std::to_string(k) + ")");
    return pow(a, (1ull << k) - 2, k);
}

// Frobenius square root: a^(2^(k-1)).
inline uint32_t sqrt(uint32_t a, int k) { return pow(a, 1ull << (k - 1), k); }

// Absolute trace to GF(2).
inline uint32_t trace(uint32_t a, int k) {
    uint32_t t = 0, x = a;
    for (int i = 0; i < k; ++i) {
        t ^= x;
        x = mul(x, x, k);
    }
    // t lies in GF(2) = {0,1}
    return t & 1u;
}

} // namespace gf2k
} // namespace conival
