#include "conival/report.hpp"

namespace conival {

nlohmann::json InvariantReport::to_json() const {
    nlohmann::json j;
    j["schema"] = "conival-report-1";
    j["algebra"] = algebra;
    j["dim"] = dim;
    j["e"] = e;
    j["f"] = f;
    j["tex"] = tex;
    j["omega"] = omega;
    j["tame"] = tame;
    j["type"] = type;
    j["residue"] = residue;
    j["witnesses"] = witnesses;
    j["certificates"] = certificates;
    j["theorem"] = theorem;
    return j;
}

InvariantReport make_report(const ValuedConic& S) {
    InvariantReport r;
    r.algebra = S.C.field->name() + " algebra of dimension " + std::to_string(S.C.dim);
    r.dim = static_cast<int>(S.C.dim);
    auto ram = ramification_and_residue(S);
    r.e = ram.e;
    r.f = ram.f;
    r.tame = !ram.wild;
    auto tex = trace_exponent(S);
    r.tex = tex.tex;
    auto om = omega_invariant(S);
    r.omega = om.omega.str();
    r.residue = ram.residue_field->name() + " space of dimension " + std::to_string(ram.f);
    if (S.C.dim >= 2 && S.C.dim <= 8) {
        try {
            r.type = classify_type(S);
        } catch (const Error&) {
            r.type = "n/a";
        }
    } else {
        r.type = "n/a";
    }
    r.theorem = S.lat.provenance;
    r.witnesses = nlohmann::json::object();
    r.witnesses["omega_witness"] = S.C.vec_str(om.witness);
    r.witnesses["w0"] = S.C.vec_str(om.regular_w0);
    for (auto& [k, v] : S.lat.marks) r.witnesses[k] = S.C.vec_str(v);
    r.certificates = nlohmann::json::array();
    r.certificates.push_back(om.certificate);
    if (S.anisotropy_certified) r.certificates.push_back("anisotropy by construction");
    return r;
}

nlohmann::json field_report(const DescPtr& F) {
    nlohmann::json j;
    j["schema"] = "conival-field-1";
    j["descriptor"] = F->name();
    j["char2"] = F->is_char2();
    if (F->is_valued()) {
        j["e_F"] = e_F(F).str();
        j["residue"] = F->residue_desc()->name();
        j["prec"] = F->prec;
    }
    return j;
}

} // namespace conival
