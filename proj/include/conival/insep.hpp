#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conival/field.hpp"
#include "conival/linalg.hpp"

namespace conival {

// A purely inseparable extension K = k(sqrt(g1),...,sqrt(gn)) of exponent at
// most one over an exact characteristic-2 field k.  Elements live on the
// monomial basis sqrt(g)^I indexed by subsets I of {1..n} as bitmasks, so
// m_I * m_J = (prod_{i in I&J} g_i) * m_{I xor J}.
struct InsepExt {
    DescPtr k;
    std::vector<FieldElement> gens; // g_i = (sqrt g_i)^2, 2-independent over k

    int n() const { return static_cast<int>(gens.size()); }
    int dim() const { return 1 << gens.size(); }
    // product of the g_i over a subset: (m_I)^2
    FieldElement gen_square(int I) const;
};

using KElem = std::vector<FieldElement>; // coordinates on the monomial basis

KElem k_zero(const InsepExt& K);
KElem k_one(const InsepExt& K);
KElem k_scalar(const InsepExt& K, const FieldElement& c);
KElem k_basis(const InsepExt& K, int I);
KElem k_add(const InsepExt& K, const KElem& a, const KElem& b);
KElem k_scale(const InsepExt& K, const FieldElement& c, const KElem& a);
KElem k_mul(const InsepExt& K, const KElem& a, const KElem& b);
bool k_is_zero(const KElem& a);
bool k_equal(const KElem& a, const KElem& b);
// a^2 lies in the base field
FieldElement k_square(const InsepExt& K, const KElem& a);
std::string k_str(const InsepExt& K, const KElem& a);

// Unital linear form: the row of values on the monomial basis, s(1) = 1.
struct UnitalForm {
    std::vector<FieldElement> row;
};

UnitalForm coeff_form(const InsepExt& K); // 1 on the empty monomial, 0 elsewhere
FieldElement s_apply(const InsepExt& K, const UnitalForm& s, const KElem& a);
// the transfer bilinear form b_{K,s}(a,b) = s(ab)
FieldElement b_Ks(const InsepExt& K, const UnitalForm& s, const KElem& a, const KElem& b);

// 2-basis adapted to s: returned roots b_1..b_n satisfy s = coefficient-of-1
// on their monomial basis, so b_{K,s} is the Pfister bilinear form on the
// slot squares.
struct TwoBasisResult {
    std::vector<KElem> roots;        // b_i as K-elements
    std::vector<FieldElement> slots; // alpha_i = b_i^2 in k
    std::vector<KElem> monomials;    // b^I for all I, the adapted basis
};
TwoBasisResult two_basis_for(const InsepExt& K, const UnitalForm& s);

// Artin-Schreier machinery --------------------------------------------------

FieldElement artin_schreier(const InsepExt& K, const UnitalForm& s, const KElem& u);

enum class ASStatus { Member, NotMember, Unknown };

struct ASResult {
    ASStatus status = ASStatus::Unknown;
    std::optional<KElem> witness; // u with u^2 + s(u) = alpha when Member
    std::string note;
};

// Decide alpha in Im(wp_{K,s}) = wp(k) + (ker s)^2.  Member verdicts carry a
// witness rechecked by evaluation; NotMember verdicts are certified either
// through a full coordinate solution or through the top-degree analysis at
// the degree valuation; everything else is Unknown.
ASResult in_AS_image(const InsepExt& K, const UnitalForm& s, const FieldElement& alpha,
                     int iter_budget = 64);

// Membership of beta in K^2 = sum_I k^2 (g^I); returns sqrt-witness in K.
std::optional<KElem> square_in_K(const InsepExt& K, const FieldElement& beta);

} // namespace conival
