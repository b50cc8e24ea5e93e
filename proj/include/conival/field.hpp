#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conival/errors.hpp"
#include "conival/mpoly.hpp"
#include "conival/zinf.hpp"

namespace conival {

class FieldElement;

enum class FieldKind { GF2k, RatFun, Laurent, Teich, Eis2 };

// Descriptor tree for the field tower.  Exact kinds: gf(2^k) and
// ratfun(gf(2^k); vars).  Valued kinds: laurent(res; prec=N) in
// characteristic 2, teich(res; prec=N) modelling the complete unramified
// characteristic-zero field with the given residue field (elements are
// fractions of integer polynomials carried mod 2^N), and eis2(base; u)
// adjoining pi with pi^2 = 2u, so lambda(pi) = 1 and lambda(2) = 2.
struct FieldDescriptor {
    FieldKind kind = FieldKind::GF2k;
    int k = 1;                                  // GF2k degree
    std::shared_ptr<const FieldDescriptor> sub; // RatFun base / Laurent,Teich residue / Eis2 base
    std::vector<std::string> vars;              // RatFun variables, at most 3
    int prec = 0;                               // truncation order, valued kinds
    int degree_budget = 128;                    // rational normalization guard
    std::shared_ptr<const FieldElement> eis_u;  // Eis2 unit, pi^2 = 2u

    bool is_exact() const { return kind == FieldKind::GF2k || kind == FieldKind::RatFun; }
    bool is_char2() const { return kind != FieldKind::Teich && kind != FieldKind::Eis2; }
    bool is_valued() const { return !is_exact(); }
    int num_vars() const { return kind == FieldKind::RatFun ? static_cast<int>(vars.size()) : 0; }
    int gf_degree() const; // k of the GF(2^k) at the bottom of an exact kind
    std::shared_ptr<const FieldDescriptor> residue_desc() const;
    std::string name() const;
};

using DescPtr = std::shared_ptr<const FieldDescriptor>;

DescPtr make_gf(int k);
DescPtr make_ratfun(DescPtr gf_base, std::vector<std::string> vars, int degree_budget = 128);
DescPtr make_laurent(DescPtr residue, int prec, int degree_budget = 128);
DescPtr make_teich(DescPtr residue, int prec, int degree_budget = 128);
DescPtr make_eis2(DescPtr teich_base, const FieldElement& unit);

bool same_descriptor(const DescPtr& a, const DescPtr& b);

// One element of the tower.  Payload members are used according to
// desc->kind; all values are immutable after construction.
class FieldElement {
public:
    FieldElement() = default;

    DescPtr desc;

    // GF2k
    uint32_t gf = 0;
    // RatFun: num/den over GF(2^k), den nonzero; stored unreduced apart from
    // cheap content cancellation and one-variable gcd reduction.
    MPoly<GF2Ring> rnum, rden;
    // Laurent: digits[i] is the coefficient of T^(lead+i) in the residue
    // field; digits are certified for exponents < lead + size.
    long llead = 0;
    std::vector<FieldElement> ldig;
    // Teich: value = 2^scale * tnum/tden with tden of odd content; the
    // numerator coefficients are certified mod 2^pbits.
    long tscale = 0;
    int tpbits = 0;
    MPoly<Z2Ring> tnum, tden;
    // Eis2: value = epair[0] + epair[1]*pi over the base field.
    std::vector<FieldElement> epair;

    bool certified_zero = false;

    // --- constructors -----------------------------------------------------
    static FieldElement zero(const DescPtr& d);
    static FieldElement one(const DescPtr& d);
    static FieldElement from_int(const DescPtr& d, long long n);
    static FieldElement variable(const DescPtr& d, int i);      // RatFun
    static FieldElement uniformizer(const DescPtr& d);          // valued kinds
    static FieldElement lift(const DescPtr& d, const FieldElement& residue_elt);
    static FieldElement embed_base(const DescPtr& d, const FieldElement& base_elt); // Eis2 from base

    // --- ring operations ---------------------------------------------------
    FieldElement add(const FieldElement& o) const;
    FieldElement sub(const FieldElement& o) const;
    FieldElement mul(const FieldElement& o) const;
    FieldElement div(const FieldElement& o) const;
    FieldElement neg() const;
    FieldElement inv() const;
    FieldElement pow_int(long long e) const;

    FieldElement operator+(const FieldElement& o) const { return add(o); }
    FieldElement operator-(const FieldElement& o) const { return sub(o); }
    FieldElement operator*(const FieldElement& o) const { return mul(o); }
    FieldElement operator/(const FieldElement& o) const { return div(o); }

    // --- valuation and reduction -------------------------------------------
    // Normalized valuation; infinity only for certified zero.  Throws
    // PrecisionExhausted when every stored digit vanishes without a zero
    // certificate.
    Zinf val() const;
    // Exponent below which the element is certified (infinity for exact kinds).
    Zinf known_precision() const;
    FieldElement residue() const;

    // --- predicates ---------------------------------------------------------
    bool is_zero_certified() const;
    // No stored digit distinguishes the element from zero.
    bool is_zero_at_precision() const;
    bool equals(const FieldElement& o) const; // equality up to shared precision
    bool is_one() const;

    std::string str() const;

    // Re-establish representation invariants after direct payload edits.
    void normalize();
};

// e_F = lambda(2): infinity in characteristic 2, 1 for teich, 2 for eis2.
Zinf e_F(const DescPtr& d);

// Root of a0 t^2 + a1 t + a2 with a0 in the valuation ideal and a1 a unit;
// Newton iteration against the derivative 2 a0 t + a1.
FieldElement hensel_quadratic(const FieldElement& a0, const FieldElement& a1, const FieldElement& a2);

// Exact characteristic-2 square root for gf/ratfun elements.
std::optional<FieldElement> sqrt_char2(const FieldElement& x);

// Absolute trace to GF(2) of a gf(2^k) element.
int gf_abs_trace(const FieldElement& x);

} // namespace conival
