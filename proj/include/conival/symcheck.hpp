#pragma once

#include <map>
#include <string>
#include <vector>

#include "conival/conic.hpp"

namespace conival {

// Symbolic identity verification: the coordinates of up to three generic
// elements are treated as commuting indeterminates (2 bits of exponent per
// indeterminate, 48 indeterminates for dimension 16), both sides of an
// identity are expanded over the base field and compared coefficient-wise.
// For truncated base fields the verdict degrades to sampled verification.

struct SymKey {
    uint64_t lo = 0, hi = 0;
    bool operator<(const SymKey& o) const { return hi != o.hi ? hi < o.hi : lo < o.lo; }
    bool operator==(const SymKey& o) const { return lo == o.lo && hi == o.hi; }
};

struct SymPoly {
    std::map<SymKey, FieldElement> t;
    bool is_zero_sym() const;
};

struct SymVec {
    std::vector<SymPoly> c;
};

enum class IdentityName {
    Quad,
    Flexible,
    LeftAlt,
    RightAlt,
    MoufangL,
    MoufangM,
    MoufangR,
    NormComposition,
    ConjInvolution,
    ADM,
    NAS,
    TEEN,
    TAS,
    CommutatorNorm,  // norm of commutators in flexible conic algebras
    AssociatorNorm,  // norm of associators in conic alternative algebras
    DefectComposition // n(xy) = n(x)n(y) + f_C for non-orthogonal towers
};

std::string identity_name_str(IdentityName n);

struct IdentityReport {
    IdentityName name;
    enum class Verdict { HoldsSymbolically, HoldsToPrecision, Fails } verdict;
    // counterexample re-checkable by direct evaluation when the verdict is Fails
    std::vector<Vec> counterexample;
    std::string detail;
};

IdentityReport check_identity(const ConicAlgebra& C, IdentityName name,
                              int samples = 64, uint64_t seed = 2024);

} // namespace conival
