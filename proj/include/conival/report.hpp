#pragma once

#include <string>

#include <json.hpp>

#include "conival/valdata.hpp"

namespace conival {

// Machine-readable invariant report with a stable schema; identical inputs
// and seeds produce byte-identical serializations.
struct InvariantReport {
    std::string algebra;
    int dim = 0;
    int e = 1;
    int f = 1;
    long tex = 0;
    std::string omega;   // "k" or "k-1/2"
    bool tame = false;
    std::string type;    // unitary / primary / n/a
    std::string residue; // descriptor-level description
    nlohmann::json witnesses;
    nlohmann::json certificates;
    std::string theorem; // constructor provenance

    nlohmann::json to_json() const;
};

InvariantReport make_report(const ValuedConic& S);

// field-level report for `build base(...)`
nlohmann::json field_report(const DescPtr& F);

} // namespace conival
