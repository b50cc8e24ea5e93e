#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conival/henscon.hpp"

namespace conival {

// Mod-2 Milnor K-theory symbols over the characteristic-zero models, with
// the unit-group filtration, depth, initial forms, and the rewriting moves
// that gather the depth into a single entry.  Formulas are kept p-generic
// where the source statements are, but only p = 2 models are constructible.

struct Symbol {
    DescPtr F;
    std::vector<FieldElement> entries;
    std::vector<std::string> rewrite_log;
};

// the largest depth of a nonzero class: m = 2 lambda(2)
long kato_bound_m(const DescPtr& F);

struct DepthK1 {
    bool zero = false;          // the class is trivial (square witness found)
    bool ramified = false;      // normalized entry has valuation 1
    long depth = 0;
    FieldElement unit;          // normalized representative
    std::string note;
};
DepthK1 depth_k1(const FieldElement& x);

// {1 + a pi^i, 1 + b pi^j} = {1 + c pi^{i+j}, d pi^{i(p-1)}} with the explicit
// c = ab/(1 + a pi^i) and d = (-a (1 + b pi^j))^{p-1}; p = 2 here
Symbol pump(const DescPtr& F, long i, const FieldElement& a, long j, const FieldElement& b);

struct InitialForm {
    long depth = 0;
    std::string component;          // which graded summand carries the class
    std::vector<std::string> data;  // residue-field entries of the datum
};

struct Gathered {
    bool zero = false;
    FieldElement u;                  // depth-carrying entry
    std::vector<FieldElement> alpha; // depth-0 tail (units first, at most one prime-valued last)
    long depth = 0;
    InitialForm form;
    std::vector<std::string> log;
    bool has_ramified_tail = false;
};

Gathered gather(const Symbol& g);
long depth_of(const Symbol& g);

// ramification index of a symbol: 2 when the depth is odd or the second
// graded summand carries the class, else 1
int e_gamma(const Symbol& g);

struct LntReport {
    bool product_zero = false;
    bool nexp_infinite = false;
    long nexp = 0;
    long depth_gamma = 0;
    long depth_product = 0; // meaningful when not product_zero
    bool inequality_ok = false;
};
LntReport lnt_k(const Symbol& g, const FieldElement& a);

struct DictReport {
    long depth = 0;
    int e_sym = 1;
    int e_alg = 1;
    long tex = 0;
    std::string omega;
    bool tame = false;
    std::string type; // unitary / primary / n/a
    bool ok = false;  // all dictionary identities hold
    std::string detail;
};
// build the corresponding algebra through the enlargement constructors and
// compare both sides of the dictionary
DictReport dictionary_check(const Symbol& g);

// the algebra corresponding to a gathered symbol (enlargement chain)
ValuedConic symbol_algebra(const Gathered& g, const DescPtr& F);

} // namespace conival
