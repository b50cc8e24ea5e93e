#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conival/field.hpp"
#include "conival/insep.hpp"
#include "conival/linalg.hpp"

namespace conival {

// Quadratic space with characteristic-2-safe coefficient data: the matrix is
// upper triangular, the diagonal holds q(e_i) and the strict upper part the
// polar values polar(e_i, e_j).  An optional base point with q = 1 makes it
// pointed.
struct QuadraticSpace {
    DescPtr field;
    size_t dim = 0;
    Mat coef; // upper triangular
    std::optional<Vec> base_point;

    FieldElement evaluate(const Vec& v) const;
    FieldElement polar(const Vec& x, const Vec& y) const;
    Vec unit_vector(size_t i) const;
    bool polar_identically_zero() const;
};

QuadraticSpace unit_form(const DescPtr& d);                 // <1> with base point
QuadraticSpace binary_form(const DescPtr& d, const FieldElement& alpha); // [1, alpha]
// <<mu>> tensor Q on V + Vj: q(u + vj) = q(u) - mu q(v)
QuadraticSpace enlarge_space(const QuadraticSpace& q, const FieldElement& mu);
// Pfister <<mu_1..mu_n; alpha]] (with final slot) or quasi-Pfister <<mu_1..mu_n>>
QuadraticSpace pfister(const DescPtr& d, const std::vector<FieldElement>& slots,
                       const std::optional<FieldElement>& final_slot);
// q_{K;alpha,s} of dimension 2 [K:k] on the basis (m_I, m_I j)
QuadraticSpace q_Ks(const InsepExt& K, const FieldElement& alpha, const UnitalForm& s);

// trace t(x) = polar(base_point, x) and conjugation x* = t(x) e - x
FieldElement space_trace(const QuadraticSpace& q, const Vec& x);
Vec space_conj(const QuadraticSpace& q, const Vec& x);

enum class IsoVerdict { Isotropic, Anisotropic, Unknown };

struct IsotropyResult {
    IsoVerdict verdict = IsoVerdict::Unknown;
    std::optional<Vec> witness;
    std::string route;
};

// decision routes of the spec: exhaustive over small finite fields,
// Artin-Schreier certificates for q_{K;alpha,s}, and a deterministic bounded
// search that may return Unknown
IsotropyResult isotropy_exhaustive_gf(const QuadraticSpace& q, uint64_t budget = 1 << 20);
IsotropyResult isotropy_qks(const InsepExt& K, const FieldElement& alpha, const UnitalForm& s);
IsotropyResult isotropy_bounded_search(const QuadraticSpace& q, int degree_budget = 2,
                                       uint64_t seed = 1);

struct QksIsometry {
    bool isometric = false;
    std::optional<KElem> u0, v0;
};

// Witness-level isometry test for q_{K;alpha,s} vs q_{K;beta,t} over the same K.
QksIsometry isometry_qKs(const InsepExt& K, const FieldElement& alpha, const UnitalForm& s,
                         const FieldElement& beta, const UnitalForm& t);

// brute-force roundness check over a small finite field (test support)
bool round_brute_gf(const QuadraticSpace& q);

} // namespace conival
