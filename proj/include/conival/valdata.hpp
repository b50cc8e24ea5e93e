#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conival/conic.hpp"

namespace conival {

// Lattice data attached by theorem-backed constructors: an o-basis of o_Q
// whose vectors have lambda_Q in {0, 1/2}, ordered so that for wild spaces of
// ramification index 1 the basis vector with index I is the I-th monomial of
// the residue field, and for index 2 the second half is the first half times
// the attached prime element.
struct LatticeInfo {
    std::vector<Vec> basis;
    std::map<std::string, Vec> marks; // w0, Pi, Xi, Xi0, texp_u, hcom1, ...
    std::string provenance;           // constructor tag
    int residue_gens = 0;             // residue basis is 2^residue_gens monomials
};

struct ValuedConic {
    ConicAlgebra C;
    LatticeInfo lat;
    bool anisotropy_certified = false;
    std::optional<std::string> type_provenance; // "unitary" or "primary"
    std::string anchor;                         // statement tag used to build it
};

// lambda_Q(x) = (1/2) lambda(n_Q(x)); infinity only for certified zero
Zinf lambda_Q(const ValuedConic& S, const Vec& x);

struct RamResidue {
    int e = 1;
    int f = 0;
    DescPtr residue_field;
    QuadraticSpace residue_form;     // on the unit part of the lattice basis
    std::vector<size_t> unit_idx;    // lattice indices of valuation-zero vectors
    bool wild = false;               // residue trace identically zero
};
RamResidue ramification_and_residue(const ValuedConic& S);

struct TexResult {
    long tex = 0;
    Vec w0;           // normalized trace generator, t(w0) = pi^tex
    Zinf lambda_w0;   // lambda_Q(w0)
};
TexResult trace_exponent(const ValuedConic& S);

struct OmegaResult {
    Zinf omega;
    Vec witness;              // element attaining lambda(t(x)) - lambda_Q(x) = omega
    std::string certificate;  // how minimality is certified
    Vec regular_w0;           // normalized regular trace generator
};
OmegaResult omega_invariant(const ValuedConic& S);

struct NexpResult {
    bool infinite = false;
    long nexp = 0;
    std::vector<Vec> norm_factors; // alpha = prod n(v_i) modulo certified precision
    std::string certificate;
};
NexpResult norm_exponent(const ValuedConic& S, const FieldElement& alpha);

// gamma with 1 - pi^{2 omega + 1} beta = n(1 + pi^tex gamma w0); rechecked by
// evaluation before returning
FieldElement local_norm_certificate(const ValuedConic& S, const FieldElement& beta);

struct HeightsResult {
    Zinf hcom, hass;
    std::vector<Vec> com_pair;  // commutator witness
    std::vector<Vec> ass_triple; // associator witness (octonions)
};
HeightsResult heights(const ValuedConic& S, int lower_bound_samples = 16, uint64_t seed = 5);

// unitary/primary classification; runs both the provenance route and the
// omega-parity route and insists that they agree
std::string classify_type(const ValuedConic& S);

// helpers shared with henscon
Vec lattice_coords(const ValuedConic& S, const Vec& x);      // over F
Vec residue_coords(const ValuedConic& S, const Vec& x);      // over the residue field
InsepExt residue_insep_ext(const ValuedConic& S);            // wild e = 1 residue field
UnitalForm residue_s_w0(const ValuedConic& S, const Vec& w0, long tex);

struct LambdaNormedReport {
    bool lambda_normed = false;
    bool lambda_valued = false;
    std::string detail;
};
LambdaNormedReport lambda_normed_check(const ValuedConic& S, int samples = 24, uint64_t seed = 11);

} // namespace conival
