#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conival/errors.hpp"
#include "conival/gf2k.hpp"

namespace conival {

// Sparse multivariate polynomials in at most four variables (three user
// variables plus one reserved for a Galois generator).  Exponents are packed
// 16 bits per variable into a uint64 key; std::map keeps term order
// deterministic.  Coefficient arithmetic is delegated to a small ring object
// so the same container serves GF(2^k) and Z/2^N coefficients.

constexpr int kMaxVars = 4;
constexpr int kGaloisVar = 3;

using Mono = uint64_t;

inline int mono_exp(Mono m, int v) { return static_cast<int>((m >> (16 * v)) & 0xffff); }

inline Mono mono_make(int e0, int e1 = 0, int e2 = 0, int e3 = 0) {
    return (static_cast<Mono>(e0) & 0xffff) | ((static_cast<Mono>(e1) & 0xffff) << 16) |
           ((static_cast<Mono>(e2) & 0xffff) << 32) | ((static_cast<Mono>(e3) & 0xffff) << 48);
}

inline Mono mono_var(int v, int e = 1) { return static_cast<Mono>(e) << (16 * v); }

inline Mono mono_mul(Mono a, Mono b) {
    for (int v = 0; v < kMaxVars; ++v) {
        if (mono_exp(a, v) + mono_exp(b, v) > 0xffff)
            throw DegreeBudgetExceeded("monomial exponent overflow");
    }
    return a + b;
}

inline bool mono_divides(Mono a, Mono b) { // a | b
    for (int v = 0; v < kMaxVars; ++v)
        if (mono_exp(a, v) > mono_exp(b, v)) return false;
    return true;
}

inline Mono mono_div(Mono b, Mono a) { return b - a; }

inline int mono_total_deg(Mono m) {
    int d = 0;
    for (int v = 0; v < kMaxVars; ++v) d += mono_exp(m, v);
    return d;
}

// Coefficient ring: GF(2^k) as bitmask values.
struct GF2Ring {
    using Value = uint64_t;
    int k = 1;
    Value zero() const { return 0; }
    Value one() const { return 1; }
    bool is_zero(Value a) const { return a == 0; }
    Value add(Value a, Value b) const { return a ^ b; }
    Value sub(Value a, Value b) const { return a ^ b; }
    Value neg(Value a) const { return a; }
    Value mul(Value a, Value b) const {
        return gf2k::mul(static_cast<uint32_t>(a), static_cast<uint32_t>(b), k);
    }
    Value inv(Value a) const { return gf2k::inv(static_cast<uint32_t>(a), k); }
    Value sqrt(Value a) const { return gf2k::sqrt(static_cast<uint32_t>(a), k); }
};

// Coefficient ring: Z/2^nbits as masked uint64 (nbits <= 62).
struct Z2Ring {
    using Value = uint64_t;
    int nbits = 16;
    Value mask() const { return nbits >= 64 ? ~0ull : ((1ull << nbits) - 1); }
    Value zero() const { return 0; }
    Value one() const { return 1; }
    bool is_zero(Value a) const { return (a & mask()) == 0; }
    Value add(Value a, Value b) const { return (a + b) & mask(); }
    Value sub(Value a, Value b) const { return (a - b) & mask(); }
    Value neg(Value a) const { return (~a + 1) & mask(); }
    Value mul(Value a, Value b) const { return (a * b) & mask(); }
    // 2-adic valuation of a residue class; nbits when the class is zero.
    int val2(Value a) const {
        a &= mask();
        if (a == 0) return nbits;
        int v = 0;
        while (!(a & 1)) { a >>= 1; ++v; }
        return v;
    }
    Value inv_odd(Value a) const { // inverse of an odd class by Newton lifting
        a &= mask();
        if (!(a & 1)) throw NotInvertible("even class in Z/2^N");
        Value x = 1;
        for (int i = 0; i < 6; ++i) x = (x * (2 - a * x)) & mask();
        return x & mask();
    }
};

template <class Ring>
struct MPoly {
    using Value = typename Ring::Value;
    std::map<Mono, Value> terms;

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first == 0); }
    Value constant_term() const {
        auto it = terms.find(0);
        return it == terms.end() ? Value(0) : it->second;
    }
    int total_deg() const {
        int d = 0;
        for (auto& [m, c] : terms) d = std::max(d, mono_total_deg(m));
        return d;
    }
    int deg_in(int v) const {
        int d = 0;
        for (auto& [m, c] : terms) d = std::max(d, mono_exp(m, v));
        return d;
    }
    bool operator==(const MPoly& o) const { return terms == o.terms; }
};

template <class Ring>
void poly_add_term(const Ring& R, MPoly<Ring>& p, Mono m, typename Ring::Value c) {
    if (R.is_zero(c)) return;
    auto it = p.terms.find(m);
    if (it == p.terms.end()) {
        p.terms.emplace(m, c);
    } else {
        it->second = R.add(it->second, c);
        if (R.is_zero(it->second)) p.terms.erase(it);
    }
}

template <class Ring>
MPoly<Ring> poly_const(const Ring& R, typename Ring::Value c) {
    MPoly<Ring> p;
    poly_add_term(R, p, 0, c);
    return p;
}

template <class Ring>
MPoly<Ring> poly_var(const Ring& R, int v, int e = 1) {
    MPoly<Ring> p;
    poly_add_term(R, p, mono_var(v, e), R.one());
    return p;
}

template <class Ring>
MPoly<Ring> poly_add(const Ring& R, const MPoly<Ring>& a, const MPoly<Ring>& b) {
    MPoly<Ring> r = a;
    for (auto& [m, c] : b.terms) poly_add_term(R, r, m, c);
    return r;
}

template <class Ring>
MPoly<Ring> poly_sub(const Ring& R, const MPoly<Ring>& a, const MPoly<Ring>& b) {
    MPoly<Ring> r = a;
    for (auto& [m, c] : b.terms) poly_add_term(R, r, m, R.neg(c));
    return r;
}

template <class Ring>
MPoly<Ring> poly_neg(const Ring& R, const MPoly<Ring>& a) {
    MPoly<Ring> r;
    for (auto& [m, c] : a.terms) r.terms.emplace(m, R.neg(c));
    return r;
}

template <class Ring>
MPoly<Ring> poly_mul(const Ring& R, const MPoly<Ring>& a, const MPoly<Ring>& b, int degree_budget = 0) {
    MPoly<Ring> r;
    for (auto& [ma, ca] : a.terms)
        for (auto& [mb, cb] : b.terms)
            poly_add_term(R, r, mono_mul(ma, mb), R.mul(ca, cb));
    if (degree_budget > 0 && r.total_deg() > degree_budget)
        throw DegreeBudgetExceeded("polynomial degree " + std::to_string(r.total_deg()) +
                                   " above budget " + std::to_string(degree_budget));
    return r;
}

template <class Ring>
MPoly<Ring> poly_scale(const Ring& R, const MPoly<Ring>& a, typename Ring::Value c) {
    MPoly<Ring> r;
    if (R.is_zero(c)) return r;
    for (auto& [m, ca] : a.terms) {
        auto v = R.mul(ca, c);
        if (!R.is_zero(v)) r.terms.emplace(m, v);
    }
    return r;
}

inline GF2Ring::Value ring_inv(const GF2Ring& R, GF2Ring::Value a) { return R.inv(a); }
inline Z2Ring::Value ring_inv(const Z2Ring& R, Z2Ring::Value a) { return R.inv_odd(a); }

// Division with remainder by a polynomial whose leading term in variable v
// is a unit times a pure power of v.  Used for Galois-generator reduction
// and for exact-division tests.
template <class Ring>
std::pair<MPoly<Ring>, MPoly<Ring>> poly_divmod_monic(const Ring& R, MPoly<Ring> num,
                                                      const MPoly<Ring>& den, int v) {
    int dd = den.deg_in(v);
    Mono lead_m = mono_var(v, dd);
    auto lead_it = den.terms.find(lead_m);
    if (lead_it == den.terms.end())
        throw InternalError("poly_divmod_monic: divisor not monic-pure in variable");
    typename Ring::Value lead = lead_it->second;
    MPoly<Ring> q;
    while (true) {
        // find a term of num with v-exponent >= dd and all other exponents arbitrary
        auto pick = num.terms.end();
        for (auto it = num.terms.begin(); it != num.terms.end(); ++it) {
            if (mono_exp(it->first, v) >= dd) { pick = it; break; }
        }
        if (pick == num.terms.end()) break;
        Mono qm = mono_div(pick->first, mono_var(v, dd));
        typename Ring::Value qc = R.mul(pick->second, ring_inv(R, lead));
        MPoly<Ring> t;
        t.terms.emplace(qm, qc);
        q = poly_add(R, q, t);
        num = poly_sub(R, num, poly_mul(R, t, den));
    }
    return {q, num};
}

} // namespace conival
