#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conival/valdata.hpp"

namespace conival {

// Theorem-backed constructors over a 2-Henselian field: every builder
// attaches the lattice and the named elements its governing statement
// provides, then verifies the predicted invariants exactly.

// the base field as a pointed space of dimension 1 (characteristic-zero kinds)
ValuedConic base_valued(const DescPtr& F);

// wild separable quadratic extensions:
//   unramified: F[t]/(t^2 - pi^r a t + b), b-bar not a square  -> e = 1
//   ramified:   F[t]/(t^2 - pi^r a t + pi b)                   -> e = 2
ValuedConic sep_quadratic(const DescPtr& F, long r, const FieldElement& a, const FieldElement& b,
                          bool ramified);

struct StandardScalar {
    enum class Case { Prime, OddUnit, EvenUnit, TopUnit, Norm } c = Case::Norm;
    long d = 0;
    FieldElement beta;
    FieldElement mu;
    std::string str() const;
};

// classify mu relative to B (lambda(mu) in {0,1} required)
StandardScalar classify_scalar(const ValuedConic& B, const FieldElement& mu);

struct PredictedData {
    int e = 1;
    long tex = 0;
    std::string residue;  // one of "B", "<<beta>> x B", "q_{K;beta0,s}"
    std::string theorem;  // constructor tag
};
PredictedData predict_enlargement(const ValuedConic& B, const StandardScalar& sc);

// Cay(B, mu) with the case-dispatched lattice; throws IsotropicResult when mu
// fails the anisotropy criterion of the governing statement, and verifies the
// predicted invariants before returning
ValuedConic enlarge(const ValuedConic& B, const FieldElement& mu);

struct PredictVerify {
    PredictedData predicted;
    int e = 0;
    long tex = 0;
    bool ok = false;
};
PredictVerify predict_and_verify(const ValuedConic& B, const FieldElement& mu);

struct ChagoreResult {
    bool anisotropic_tame = false;
    std::optional<ValuedConic> Q;    // when tame
    std::optional<Vec> iso_witness;  // when isotropic
    FieldElement beta0_bar;          // residue datum tested
};
// mu = 1 - pi^{2 tex(P)} beta; decides via the Artin-Schreier image of the
// residue datum and builds + verifies the tame output
ChagoreResult chagore_test(const ValuedConic& P, const FieldElement& beta);

// normal forms (quaternion case II / octonion case III alternatives)
enum class NFCase { Unramified, UnitRamified, PrimeRamified };
ValuedConic normal_form_quaternion(const ValuedConic& L, const FieldElement& alpha, NFCase which);
ValuedConic normal_form_octonion(const ValuedConic& L, const FieldElement& alpha,
                                 const FieldElement& beta, NFCase which);

// composition division algebra with prescribed (e, n, r) and residue data
ValuedConic preassigned(const DescPtr& F, int e, int n, long r,
                        const std::vector<FieldElement>& residue_gens);

// mutually non-isomorphic algebras with identical (e, residue, tex)
struct PairsFamily {
    std::vector<ValuedConic> algebras;
    std::vector<FieldElement> alphas;
    std::string certificate;
};
PairsFamily pairs_family(const DescPtr& F, const std::vector<FieldElement>& Kprime_gens,
                         const FieldElement& Lprime_gen, long r, long s, int count);

// unramified wild towers over a characteristic-zero field with prescribed
// residue chain (dimension 2^n, e = 1, tex = lambda(2))
ValuedConic build_teich_family(const DescPtr& F, int n);

// ramified chains over characteristic-2 Laurent fields: a division algebra
// over the residue field, lifted coefficientwise and doubled by the prime
ValuedConic build_laur_family(int n, int prec = 8);

} // namespace conival
