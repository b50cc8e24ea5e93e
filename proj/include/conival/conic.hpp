#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conival/field.hpp"
#include "conival/insep.hpp"
#include "conival/quadspace.hpp"

namespace conival {

// Construction trail of an algebra; valuation-theoretic routines dispatch on
// it (theorem-backed constructors always know what they built).
struct ConicProvenance {
    enum class Kind { Base, Etale, SepQuadratic, Cay, NonorthCD } kind = Kind::Base;
    std::vector<FieldElement> cay_slots;           // mu-chain for Cay towers
    std::shared_ptr<InsepExt> K;                   // NonorthCD data
    std::shared_ptr<UnitalForm> s;
    std::optional<FieldElement> mu;                // NonorthCD / last Cay slot
};

// Conic algebra as a structure-constant algebra: e_i e_j = sum_k sc[i][j][k] e_k,
// with unit vector and norm form (base point = unit).  Trace and conjugation
// are derived from the norm.
struct ConicAlgebra {
    DescPtr field;
    size_t dim = 0;
    std::vector<std::vector<Vec>> sc;
    Vec unit;
    QuadraticSpace norm;
    ConicProvenance prov;

    Vec zero_vec() const { return Vec(dim, FieldElement::zero(field)); }
    Vec basis(size_t i) const;
    Vec scal(const FieldElement& c) const; // c * 1_C
    Vec mul(const Vec& x, const Vec& y) const;
    Vec add(const Vec& x, const Vec& y) const;
    Vec sub(const Vec& x, const Vec& y) const;
    Vec smul(const FieldElement& c, const Vec& x) const;
    FieldElement n(const Vec& x) const { return norm.evaluate(x); }
    FieldElement n2(const Vec& x, const Vec& y) const { return norm.polar(x, y); }
    FieldElement tr(const Vec& x) const { return norm.polar(unit, x); }
    Vec conj(const Vec& x) const;
    Vec inverse(const Vec& x) const; // n(x)^{-1} x*, throws NotInvertible
    Vec commutator(const Vec& x, const Vec& y) const;
    Vec associator(const Vec& x, const Vec& y, const Vec& z) const;
    bool vec_zero(const Vec& x) const;
    bool vec_equal(const Vec& x, const Vec& y) const;
    std::string vec_str(const Vec& x) const;
};

ConicAlgebra base_algebra(const DescPtr& d);
// quadratic etale k[t]/(t^2 - t + mu), norm [1, mu]
ConicAlgebra etale_algebra(const DescPtr& d, const FieldElement& mu);
// separable quadratic F[t]/(t^2 - a t + b) with a = t(theta), b = n(theta)
ConicAlgebra quadratic_algebra(const DescPtr& d, const FieldElement& a, const FieldElement& b);
ConicAlgebra cayley_dickson(const ConicAlgebra& B, const FieldElement& mu);
ConicAlgebra cd_process(const ConicAlgebra& B, const std::vector<FieldElement>& mus);
// non-orthogonal Cayley-Dickson Cay(K; mu, s) on K + Kj
ConicAlgebra nonorth_cd(const InsepExt& K, const FieldElement& mu, const UnitalForm& s);

// embed a K-element into the first summand of a NonorthCD algebra
Vec nocd_embed(const ConicAlgebra& C, const KElem& u);
Vec nocd_embed_j(const ConicAlgebra& C, const KElem& v); // v j

// the alternating quadrilinear defect f_C of the non-orthogonal construction
FieldElement composition_defect(const ConicAlgebra& C, const KElem& u1, const KElem& u2,
                                const KElem& v1, const KElem& v2);

// hom Cay(K; n_C(l), s_l) -> C extending K and sending j to l; the returned
// images are checked multiplicative on the basis
struct EmbedResult {
    ConicAlgebra model;     // Cay(K; n(l), s_l)
    std::vector<Vec> image; // images of the model basis inside C
};
EmbedResult embed_from_element(const ConicAlgebra& C, const std::vector<Vec>& K_images,
                               const InsepExt& K, const Vec& l);

// classical presentation Cay(B, u^2) of a non-orthogonal tower along an
// intermediate subfield spanned by a generator subset
struct OrthogonalizeResult {
    ConicAlgebra B;         // Cay(K'; mu, s|K')
    FieldElement slot;      // u^2
    ConicAlgebra classical; // Cay(B, u^2)
    std::vector<Vec> iso;   // basis images in C, verified multiplicative
};
OrthogonalizeResult orthogonalize(const ConicAlgebra& C, int subset_mask);

struct DivisionResult {
    enum class Verdict { Division, ZeroDivisors, Unknown } verdict = Verdict::Unknown;
    std::optional<std::pair<Vec, Vec>> zero_pair;
    std::string route;
};
DivisionResult is_division_desk(const ConicAlgebra& C);

std::vector<Vec> nucleus(const ConicAlgebra& C);
std::vector<Vec> center(const ConicAlgebra& C);

} // namespace conival
