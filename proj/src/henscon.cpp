#include "conival/henscon.hpp"

#include "conival/sqclass.hpp"

namespace conival {

namespace {

FieldElement pi_of(const DescPtr& F) { return FieldElement::uniformizer(F); }

// search the witness set for an element with lambda_C(u - u*) = tex; this is
// the conjugation gap used by the height computations
void attach_conjgap(ValuedConic& S) {
    long tex;
    try {
        tex = trace_exponent(S).tex;
    } catch (const Error&) {
        return;
    }
    std::vector<Vec> cands = S.lat.basis;
    for (auto& [k, v] : S.lat.marks) cands.push_back(v);
    for (size_t i = 0; i < S.lat.basis.size(); ++i)
        for (size_t j = i + 1; j < S.lat.basis.size(); ++j)
            cands.push_back(S.C.add(S.lat.basis[i], S.lat.basis[j]));
    for (auto& u : cands) {
        try {
            if (!(lambda_Q(S, u) == Zinf::of(0))) continue;
            Vec gap = S.C.sub(u, S.C.conj(u));
            FieldElement n = S.C.n(gap);
            if (n.is_zero_certified()) continue;
            if (Zinf::halves(n.val().as_integer()) == Zinf::of(tex)) {
                S.lat.marks["conjgap_u"] = u;
                return;
            }
        } catch (const Error&) {
            continue;
        }
    }
}

// tame height witnesses: unit pairs (and triples) whose commutator
// (associator) is a lattice unit
void attach_tame_height_marks(ValuedConic& S) {
    if (S.C.dim != 4 && S.C.dim != 8) return;
    auto unit_pairs = [&](auto&& accept2) {
        for (size_t i = 0; i < S.lat.basis.size(); ++i)
            for (size_t j = 0; j < S.lat.basis.size(); ++j) {
                const Vec& x = S.lat.basis[i];
                const Vec& y = S.lat.basis[j];
                if (accept2(x, y)) return true;
            }
        return false;
    };
    unit_pairs([&](const Vec& x, const Vec& y) {
        try {
            if (!(lambda_Q(S, x) == Zinf::of(0)) || !(lambda_Q(S, y) == Zinf::of(0))) return false;
            Vec c = S.C.commutator(x, y);
            FieldElement n = S.C.n(c);
            if (n.is_zero_certified() || n.val() != Zinf::of(0)) return false;
            S.lat.marks["hcom1"] = x;
            S.lat.marks["hcom2"] = y;
            return true;
        } catch (const Error&) {
            return false;
        }
    });
    if (S.C.dim == 8 && S.lat.marks.count("hcom1")) {
        for (size_t k = 0; k < S.lat.basis.size(); ++k) {
            try {
                const Vec& z = S.lat.basis[k];
                if (!(lambda_Q(S, z) == Zinf::of(0))) continue;
                Vec a = S.C.associator(S.lat.marks["hcom1"], S.lat.marks["hcom2"], z);
                FieldElement n = S.C.n(a);
                if (n.is_zero_certified() || n.val() != Zinf::of(0)) continue;
                S.lat.marks["hass3"] = z;
                break;
            } catch (const Error&) {
                continue;
            }
        }
    }
}

// verify the invariants of a freshly built enlargement against the prediction
void verify_against(const ValuedConic& C, const PredictedData& pd) {
    auto ram = ramification_and_residue(C);
    if (ram.e != pd.e)
        throw InternalError("predicted e = " + std::to_string(pd.e) + " but computed " +
                            std::to_string(ram.e) + " [" + pd.theorem + "]");
    auto tex = trace_exponent(C);
    if (tex.tex != pd.tex)
        throw InternalError("predicted tex = " + std::to_string(pd.tex) + " but computed " +
                            std::to_string(tex.tex) + " [" + pd.theorem + "]");
}

} // namespace

ValuedConic base_valued(const DescPtr& F) {
    if (F->is_char2()) throw Unsupported("the one-dimensional pointed space needs characteristic zero");
    ValuedConic S;
    S.C = base_algebra(F);
    S.lat.basis = {S.C.unit};
    S.lat.provenance = "base field";
    S.lat.residue_gens = 0;
    S.anisotropy_certified = true;
    S.anchor = "base";
    S.lat.marks["w0"] = S.C.scal(pi_of(F).pow_int(e_F(F).as_integer()).div(FieldElement::from_int(F, 2)));
    return S;
}

ValuedConic sep_quadratic(const DescPtr& F, long r, const FieldElement& a, const FieldElement& b,
                          bool ramified) {
    if (r < 1) throw PreconditionViolated("sep_quadratic needs r >= 1");
    if (a.val() != Zinf::of(0)) throw PreconditionViolated("sep_quadratic needs a unit alpha");
    FieldElement pi = pi_of(F);
    FieldElement tr = pi.pow_int(r).mul(a);
    ValuedConic S;
    if (!ramified) {
        if (b.val() != Zinf::of(0)) throw PreconditionViolated("unramified case needs a unit beta");
        // b-bar must not be a square in the residue field
        if (sqclass::is_square(b.residue()))
            throw PreconditionViolated("unramified case needs a nonsquare residue");
        S.C = quadratic_algebra(F, tr, b);
        S.lat.basis = {S.C.unit, S.C.basis(1)};
        S.lat.residue_gens = 1;
        S.lat.provenance = "wild unramified quadratic";
        S.anchor = "sep-quadratic-unramified";
        S.lat.marks["theta"] = S.C.basis(1);
        // trace generator theta with t(theta) = pi^r a
        long eF_or_r = r;
        if (!e_F(F).is_infinity()) eF_or_r = std::min<long long>(r, e_F(F).as_integer());
        auto tex = trace_exponent(S);
        if (tex.tex != eF_or_r) throw InternalError("sep_quadratic tex != min(e_F, r)");
    } else {
        if (b.val() != Zinf::of(0)) throw PreconditionViolated("ramified case needs a unit beta");
        S.C = quadratic_algebra(F, tr, pi.mul(b));
        S.lat.basis = {S.C.unit, S.C.basis(1)};
        S.lat.residue_gens = 0;
        S.lat.provenance = "ramified quadratic";
        S.anchor = "sep-quadratic-ramified";
        S.lat.marks["Pi"] = S.C.basis(1);
        long eF_or_r = r;
        if (!e_F(F).is_infinity()) eF_or_r = std::min<long long>(r, e_F(F).as_integer());
        auto tex = trace_exponent(S);
        if (tex.tex != eF_or_r) throw InternalError("sep_quadratic tex != min(e_F, r)");
    }
    S.anisotropy_certified = true;
    attach_conjgap(S);
    return S;
}

std::string StandardScalar::str() const {
    switch (c) {
        case Case::Prime: return "prime";
        case Case::OddUnit: return "odd-unit d=" + std::to_string(d);
        case Case::EvenUnit: return "even-unit d=" + std::to_string(d);
        case Case::TopUnit: return "top-unit d=" + std::to_string(d);
        case Case::Norm: return "norm";
    }
    return "?";
}

StandardScalar classify_scalar(const ValuedConic& B, const FieldElement& mu) {
    StandardScalar sc;
    sc.mu = mu;
    sc.beta = FieldElement::zero(B.C.field);
    Zinf v = mu.val();
    if (v == Zinf::of(1)) {
        sc.c = StandardScalar::Case::Prime;
        return sc;
    }
    if (!(v == Zinf::of(0)))
        throw PreconditionViolated("enlargement scalar must be normalized to a unit or a prime");
    FieldElement delta = FieldElement::one(B.C.field).sub(mu);
    if (delta.is_zero_at_precision()) {
        sc.c = StandardScalar::Case::Norm; // mu = 1 is trivially a norm
        return sc;
    }
    long tex = trace_exponent(B).tex;
    long d = delta.val().as_integer();
    sc.d = d;
    sc.beta = delta.div(pi_of(B.C.field).pow_int(d));
    if (d > 2 * tex) {
        sc.c = StandardScalar::Case::Norm; // local norm theorem consumes it
        return sc;
    }
    if (d == 2 * tex) {
        sc.c = StandardScalar::Case::TopUnit;
        return sc;
    }
    sc.c = (d % 2 == 1) ? StandardScalar::Case::OddUnit : StandardScalar::Case::EvenUnit;
    return sc;
}

PredictedData predict_enlargement(const ValuedConic& B, const StandardScalar& sc) {
    PredictedData pd;
    long texB = trace_exponent(B).tex;
    switch (sc.c) {
        case StandardScalar::Case::Prime:
            pd = {2, texB, "B", "prime enlargement"};
            break;
        case StandardScalar::Case::OddUnit:
            pd = {2, texB - (sc.d - 1) / 2, "B", "odd unit enlargement"};
            break;
        case StandardScalar::Case::EvenUnit:
            pd = {1, texB - sc.d / 2, "<<beta>> x B", "even unit enlargement"};
            break;
        case StandardScalar::Case::TopUnit:
            pd = {1, 0, "q_{K;beta0,s}", "top unit enlargement"};
            break;
        case StandardScalar::Case::Norm:
            throw IsotropicResult("scalar is a norm: the enlargement is hyperbolic");
    }
    return pd;
}

ValuedConic enlarge(const ValuedConic& B, const FieldElement& mu) {
    const DescPtr& F = B.C.field;
    FieldElement pi = pi_of(F);
    auto ramB = ramification_and_residue(B);
    if (ramB.e != 1) throw PreconditionViolated("enlargement needs ramification index 1");
    StandardScalar sc = classify_scalar(B, mu);
    if (sc.c == StandardScalar::Case::Norm)
        throw IsotropicResult("enlargement scalar is a norm of the base space");
    ValuedConic C;
    C.C = cayley_dickson(B.C, mu);
    size_t n = B.C.dim;
    auto embed = [&](const Vec& u) {
        Vec v = C.C.zero_vec();
        for (size_t i = 0; i < n; ++i) v[i] = u[i];
        return v;
    };
    Vec j = C.C.basis(n);
    auto carry_mark = [&](const char* name) {
        auto it = B.lat.marks.find(name);
        if (it != B.lat.marks.end()) C.lat.marks[name] = embed(it->second);
    };
    PredictedData pd = predict_enlargement(B, sc);
    switch (sc.c) {
        case StandardScalar::Case::Prime: {
            for (auto& b : B.lat.basis) C.lat.basis.push_back(embed(b));
            for (auto& b : B.lat.basis) C.lat.basis.push_back(C.C.mul(embed(b), j));
            C.lat.residue_gens = B.lat.residue_gens;
            C.lat.provenance = "prime enlargement";
            C.anchor = "enlarge-prime";
            C.lat.marks["Pi"] = j;
            C.lat.marks["j"] = j;
            // primary type: doubling an unramified associative algebra by a prime
            if (B.C.dim <= 4) C.type_provenance = "primary";
            break;
        }
        case StandardScalar::Case::OddUnit: {
            if (!ramB.wild) throw Unsupported("odd unit enlargement needs a wild base");
            if (sc.beta.val() != Zinf::of(0)) throw PreconditionViolated("odd case needs a unit beta");
            // Pi = Theta_d = pi^{-(d-1)/2} (1_B + j), a prime element of o_C
            Vec one_plus_j = C.C.add(embed(B.C.unit), j);
            Vec Pi = C.C.smul(pi.pow_int(-(sc.d - 1) / 2), one_plus_j);
            for (auto& b : B.lat.basis) C.lat.basis.push_back(embed(b));
            for (auto& b : B.lat.basis) C.lat.basis.push_back(C.C.mul(embed(b), Pi));
            C.lat.residue_gens = B.lat.residue_gens;
            C.lat.provenance = "odd unit enlargement";
            C.anchor = "enlarge-odd-unit";
            C.lat.marks["Pi"] = Pi;
            // trace generator of C inside p_C: (trace generator of B) * Pi
            auto texB = trace_exponent(B);
            C.lat.marks["pC_tracegen"] = C.C.mul(embed(texB.w0), Pi);
            if (B.C.dim <= 4) C.type_provenance = "unitary";
            break;
        }
        case StandardScalar::Case::EvenUnit: {
            if (!ramB.wild) throw Unsupported("even unit enlargement needs a wild base");
            // beta-bar must avoid the squares of the residue field
            InsepExt Kb = residue_insep_ext(B);
            auto sq = square_in_K(Kb, sc.beta.residue());
            if (sq) {
                throw IsotropicResult("even-unit scalar with square residue: nexp exceeds d");
            }
            Vec Xi = C.C.smul(pi.pow_int(-sc.d / 2), C.C.add(embed(B.C.unit), j));
            for (auto& b : B.lat.basis) C.lat.basis.push_back(embed(b));
            for (auto& b : B.lat.basis) C.lat.basis.push_back(C.C.mul(embed(b), Xi));
            C.lat.residue_gens = B.lat.residue_gens + 1;
            C.lat.provenance = "even unit enlargement";
            C.anchor = "enlarge-even-unit";
            C.lat.marks["Xi"] = Xi;
            if (B.C.dim <= 4) C.type_provenance = "unitary";
            break;
        }
        case StandardScalar::Case::TopUnit: {
            auto ch = chagore_test(B, sc.beta);
            if (!ch.anisotropic_tame)
                throw IsotropicResult("top-unit scalar inside the Artin-Schreier image");
            C = *ch.Q;
            return C;
        }
        case StandardScalar::Case::Norm:
            throw IsotropicResult("norm scalar");
    }
    C.anisotropy_certified = true;
    carry_mark("conjgap_u");
    // height witnesses for composition-sized outputs
    if ((C.C.dim == 4 || C.C.dim == 8) && B.lat.marks.count("conjgap_u")) {
        Vec second = C.lat.marks.count("Pi") ? C.lat.marks["Pi"]
                     : C.lat.marks.count("Xi") ? C.lat.marks["Xi"]
                                               : j;
        C.lat.marks["hcom1"] = embed(B.lat.marks.at("conjgap_u"));
        C.lat.marks["hcom2"] = second;
        if (C.C.dim == 8 && B.lat.marks.count("hcom1") && B.lat.marks.count("hcom2")) {
            C.lat.marks["hass3"] = second;
            C.lat.marks["hcom1"] = embed(B.lat.marks.at("hcom1"));
            C.lat.marks["hcom2"] = embed(B.lat.marks.at("hcom2"));
            C.lat.marks["hcomA"] = embed(B.lat.marks.at("conjgap_u"));
            C.lat.marks["hcomB"] = second;
        }
    }
    verify_against(C, pd);
    // residue comparison per the governing statement
    auto ram = ramification_and_residue(C);
    if (sc.c == StandardScalar::Case::Prime || sc.c == StandardScalar::Case::OddUnit) {
        // residue space = B-bar on the first half of the basis
        auto ramb = ramification_and_residue(B);
        for (size_t a = 0; a < ramb.unit_idx.size(); ++a)
            for (size_t b2 = a; b2 < ramb.unit_idx.size(); ++b2)
                if (!ram.residue_form.coef[a][b2].equals(ramb.residue_form.coef[a][b2]))
                    throw InternalError("residue space differs from the base residue");
    } else if (sc.c == StandardScalar::Case::EvenUnit) {
        // residue space = <<beta-bar>> tensor B-bar
        auto ramb = ramification_and_residue(B);
        auto expect = enlarge_space(ramb.residue_form, sc.beta.residue());
        for (size_t a = 0; a < ram.residue_form.dim; ++a)
            for (size_t b2 = a; b2 < ram.residue_form.dim; ++b2)
                if (!ram.residue_form.coef[a][b2].equals(expect.coef[a][b2]))
                    throw InternalError("residue space differs from <<beta>> x B-bar");
    }
    attach_conjgap(C);
    return C;
}

PredictVerify predict_and_verify(const ValuedConic& B, const FieldElement& mu) {
    PredictVerify out;
    StandardScalar sc = classify_scalar(B, mu);
    out.predicted = predict_enlargement(B, sc);
    ValuedConic C = enlarge(B, mu);
    auto ram = ramification_and_residue(C);
    auto tex = trace_exponent(C);
    out.e = ram.e;
    out.tex = tex.tex;
    out.ok = (out.e == out.predicted.e) && (out.tex == out.predicted.tex);
    if (!out.ok) throw InternalError("enlargement invariants differ from the prediction");
    return out;
}

ChagoreResult chagore_test(const ValuedConic& P, const FieldElement& beta) {
    ChagoreResult out;
    const DescPtr& F = P.C.field;
    FieldElement pi = pi_of(F);
    auto ram = ramification_and_residue(P);
    if (ram.e != 1 || !ram.wild) throw PreconditionViolated("chagore test needs a wild base of index 1");
    auto om = omega_invariant(P);
    long tex = trace_exponent(P).tex;
    const Vec& w0 = om.regular_w0;
    FieldElement mu = FieldElement::one(F).sub(pi.pow_int(2 * tex).mul(beta));
    FieldElement beta0 = P.C.n(w0).mul(beta);
    out.beta0_bar = beta0.residue();
    InsepExt Kb = residue_insep_ext(P);
    UnitalForm sb = residue_s_w0(P, w0, tex);
    auto as = in_AS_image(Kb, sb, out.beta0_bar);
    if (as.status == ASStatus::Unknown)
        throw ResidueDecisionUnknown("chagore residue datum undecided; construction aborted");
    if (as.status == ASStatus::Member) {
        // isotropic: produce a witness vector for <<mu>> x P via the defect loop
        out.anisotropic_tame = false;
        ValuedConic Ctmp;
        Ctmp.C = cayley_dickson(P.C, mu);
        auto nx = norm_exponent(P, mu);
        if (!nx.infinite) throw InternalError("member datum but mu is not a norm");
        // n(v) = mu (to precision) with v the product of the factors
        Vec v = P.C.unit;
        for (auto& f : nx.norm_factors) v = P.C.mul(v, f);
        size_t n = P.C.dim;
        Vec w = Ctmp.C.zero_vec();
        for (size_t i = 0; i < n; ++i) w[i] = v[i];
        w[n] = FieldElement::one(F); // v + 1 j has norm n(v) - mu = 0
        if (!Ctmp.C.n(w).is_zero_at_precision())
            throw InternalError("isotropy witness failed recheck");
        out.iso_witness = w;
        return out;
    }
    out.anisotropic_tame = true;
    ValuedConic C;
    C.C = cayley_dickson(P.C, mu);
    size_t n = P.C.dim;
    auto embed = [&](const Vec& u) {
        Vec v = C.C.zero_vec();
        for (size_t i = 0; i < n; ++i) v[i] = u[i];
        return v;
    };
    Vec j = C.C.basis(n);
    Vec Xi0 = C.C.smul(pi.pow_int(-tex), C.C.add(embed(w0), C.C.mul(embed(w0), j)));
    // t(Xi0) = 1 and n(Xi0) = beta0
    if (!C.C.tr(Xi0).sub(FieldElement::one(F)).is_zero_at_precision())
        throw InternalError("t(Xi0) != 1");
    if (!C.C.n(Xi0).sub(beta0).is_zero_at_precision())
        throw InternalError("n(Xi0) != beta0");
    for (auto& b : P.lat.basis) C.lat.basis.push_back(embed(b));
    for (auto& b : P.lat.basis) C.lat.basis.push_back(C.C.mul(embed(b), Xi0));
    C.lat.residue_gens = -1; // tame residue: no inseparable structure
    C.lat.provenance = "tame top-unit enlargement";
    C.anchor = "enlarge-top-unit";
    C.lat.marks["Xi0"] = Xi0;
    C.anisotropy_certified = true;
    C.type_provenance = (C.C.dim <= 8 && P.C.dim <= 4) ? std::optional<std::string>("unitary")
                                                       : std::nullopt;
    // the residue space must realize q_{K;beta0,s_w0}
    auto ramC = ramification_and_residue(C);
    if (ramC.e != 1 || ramC.wild) throw InternalError("top-unit output must be tame of index 1");
    auto expect = q_Ks(Kb, out.beta0_bar, sb);
    for (size_t a = 0; a < ramC.residue_form.dim; ++a)
        for (size_t b2 = a; b2 < ramC.residue_form.dim; ++b2)
            if (!ramC.residue_form.coef[a][b2].equals(expect.coef[a][b2]))
                throw InternalError("tame residue space differs from q_{K;beta0,s}");
    auto texC = trace_exponent(C);
    if (texC.tex != 0) throw InternalError("tame output with positive trace exponent");
    attach_conjgap(C);
    attach_tame_height_marks(C);
    out.Q = C;
    return out;
}

ValuedConic normal_form_quaternion(const ValuedConic& L, const FieldElement& alpha, NFCase which) {
    const DescPtr& F = L.C.field;
    FieldElement pi = pi_of(F);
    FieldElement slot;
    switch (which) {
        case NFCase::Unramified: slot = alpha; break;                                  // alpha-bar not in L-bar^2
        case NFCase::UnitRamified: slot = FieldElement::one(F).sub(pi.mul(alpha)); break; // 1 - pi alpha
        case NFCase::PrimeRamified: slot = pi.mul(alpha); break;                        // pi alpha
    }
    ValuedConic C = enlarge(L, slot);
    auto ram = ramification_and_residue(C);
    int expect_e = (which == NFCase::Unramified) ? 1 : 2;
    if (ram.e != expect_e) throw InternalError("normal form quaternion: unexpected e");
    return C;
}

ValuedConic normal_form_octonion(const ValuedConic& L, const FieldElement& alpha,
                                 const FieldElement& beta, NFCase which) {
    ValuedConic B = normal_form_quaternion(L, alpha, NFCase::Unramified);
    const DescPtr& F = L.C.field;
    FieldElement pi = pi_of(F);
    FieldElement slot;
    switch (which) {
        case NFCase::Unramified: slot = beta; break;
        case NFCase::UnitRamified: slot = FieldElement::one(F).sub(pi.mul(beta)); break;
        case NFCase::PrimeRamified: slot = pi.mul(beta); break;
    }
    ValuedConic C = enlarge(B, slot);
    auto ram = ramification_and_residue(C);
    int expect_e = (which == NFCase::Unramified) ? 1 : 2;
    if (ram.e != expect_e) throw InternalError("normal form octonion: unexpected e");
    return C;
}

ValuedConic preassigned(const DescPtr& F, int e, int n, long r,
                        const std::vector<FieldElement>& residue_gens) {
    // constraints (a) and (b)
    Zinf eF = e_F(F);
    if (e != 1 && e != 2) throw ConstraintViolation("e must be 1 or 2");
    if (n < 0 || n > 4 - e) throw ConstraintViolation("n out of range for composition algebras");
    if (r < 0 || (!eF.is_infinity() && static_cast<long long>(r) > eF.as_integer()))
        throw ConstraintViolation("r exceeds the absolute ramification index");
    if (n == 0 && e == 1 && (eF.is_infinity() || static_cast<long long>(r) != eF.as_integer()))
        throw ConstraintViolation("the base field itself needs r = e_F");
    if (r == 0) throw Unsupported("tame preassigned data handled by the chagore constructor");
    if (n == 0) {
        if (e == 1) return base_valued(F);
        return sep_quadratic(F, r, FieldElement::one(F), FieldElement::one(F), true);
    }
    if (static_cast<int>(residue_gens.size()) != n)
        throw ConstraintViolation("need exactly n residue generators");
    ValuedConic C = sep_quadratic(F, r, FieldElement::one(F), residue_gens[0], false);
    for (int i = 1; i < n; ++i) {
        FieldElement mu = FieldElement::one(F).sub(residue_gens[static_cast<size_t>(i)]);
        C = enlarge(C, mu);
    }
    if (e == 2) C = enlarge(C, pi_of(F));
    auto ram = ramification_and_residue(C);
    auto tex = trace_exponent(C);
    if (ram.e != e || tex.tex != r) throw InternalError("preassigned invariants mismatch");
    return C;
}

PairsFamily pairs_family(const DescPtr& F, const std::vector<FieldElement>& Kprime_gens,
                         const FieldElement& Lprime_gen, long r, long s, int count) {
    if (!(0 < s && s < r)) throw PreconditionViolated("pairs family needs 0 < s < r <= e_F");
    PairsFamily out;
    ValuedConic B = preassigned(F, 1, static_cast<int>(Kprime_gens.size()), r, Kprime_gens);
    FieldElement pi = pi_of(F);
    long d = 2 * (r - s);
    // alphas: lifts of squares delta^2 with delta among small residue elements
    std::vector<FieldElement> deltas;
    deltas.push_back(FieldElement::one(F));
    for (auto& g : Kprime_gens) deltas.push_back(g);
    for (auto& g : Kprime_gens) deltas.push_back(FieldElement::one(F).add(g));
    InsepExt Kb = residue_insep_ext(B);
    for (auto& del : deltas) {
        if (static_cast<int>(out.algebras.size()) >= count) break;
        FieldElement alpha = del.mul(del);
        FieldElement mu = FieldElement::one(F).sub(pi.pow_int(d).mul(alpha).mul(Lprime_gen));
        // duplicate residues are rejected
        bool dup = false;
        for (auto& prev : out.alphas)
            if (prev.residue().equals(alpha.residue())) dup = true;
        if (dup) continue;
        ValuedConic C = enlarge(B, mu);
        auto tex = trace_exponent(C);
        auto ram = ramification_and_residue(C);
        if (tex.tex != s || ram.e != 1) throw InternalError("pairs family invariants mismatch");
        out.algebras.push_back(std::move(C));
        out.alphas.push_back(alpha);
    }
    // pairwise distinction: (alpha_i + alpha_j) L'-gen must avoid B-bar^2
    for (size_t i = 0; i < out.alphas.size(); ++i)
        for (size_t j = i + 1; j < out.alphas.size(); ++j) {
            FieldElement diff =
                out.alphas[i].residue().add(out.alphas[j].residue()).mul(Lprime_gen.residue());
            if (square_in_K(Kb, diff))
                throw InternalError("pairs family members not distinguished by the residue datum");
        }
    out.certificate = "norm-class residues distinct modulo the squares of the base residue field";
    return out;
}

ValuedConic build_teich_family(const DescPtr& F, int n) {
    if (F->kind != FieldKind::Teich) throw Unsupported("the unramified wild tower needs a teich base");
    DescPtr rf = F->residue_desc();
    if (rf->num_vars() < n) throw PreconditionViolated("need at least n residue variables");
    ValuedConic C = base_valued(F);
    for (int i = 0; i < n; ++i) {
        FieldElement beta = FieldElement::lift(F, FieldElement::variable(rf, i));
        C = enlarge(C, FieldElement::one(F).sub(beta));
    }
    return C;
}

ValuedConic build_laur_family(int n, int prec) {
    // residue field: the rational function field in min(n-1, 3) variables
    std::vector<std::string> vars = {"x", "y", "z"};
    int nv = std::min(std::max(n - 1, 1), 3);
    auto rf = make_ratfun(make_gf(1), std::vector<std::string>(vars.begin(), vars.begin() + nv));
    auto F = make_laurent(rf, prec);
    // division algebra over the residue field, lifted coefficientwise
    ConicAlgebra A;
    if (n <= 1) {
        A = base_algebra(rf);
    } else {
        // K on the first n-2 variables, slot the next one (or 1 when all
        // variables are consumed by the generators)
        InsepExt K{rf, {}};
        for (int i = 0; i < n - 2 && i < nv; ++i) K.gens.push_back(FieldElement::variable(rf, i));
        FieldElement mu = (n - 2 < nv) ? FieldElement::variable(rf, std::max(0, n - 2))
                                       : FieldElement::one(rf);
        auto s = coeff_form(K);
        A = nonorth_cd(K, mu, s);
        auto div = is_division_desk(A);
        if (div.verdict != DivisionResult::Verdict::Division)
            throw InternalError("residue algebra of the chain is not certified division");
    }
    // lift A to B over F and double by the prime
    ValuedConic B;
    B.C.field = F;
    B.C.dim = A.dim;
    B.C.unit = Vec(A.dim, FieldElement::zero(F));
    for (size_t i = 0; i < A.dim; ++i) B.C.unit[i] = FieldElement::lift(F, A.unit[i]);
    B.C.sc.assign(A.dim, std::vector<Vec>(A.dim, Vec(A.dim, FieldElement::zero(F))));
    for (size_t i = 0; i < A.dim; ++i)
        for (size_t j = 0; j < A.dim; ++j)
            for (size_t k = 0; k < A.dim; ++k)
                B.C.sc[i][j][k] = FieldElement::lift(F, A.sc[i][j][k]);
    B.C.norm.field = F;
    B.C.norm.dim = A.dim;
    B.C.norm.coef = mat_zero(F, A.dim, A.dim);
    for (size_t i = 0; i < A.dim; ++i)
        for (size_t j = i; j < A.dim; ++j)
            B.C.norm.coef[i][j] = FieldElement::lift(F, A.norm.coef[i][j]);
    B.C.norm.base_point = B.C.unit;
    B.C.prov = A.prov;
    for (size_t i = 0; i < A.dim; ++i) B.lat.basis.push_back(B.C.basis(i));
    B.lat.provenance = "coefficientwise lift of a residue division algebra";
    B.lat.residue_gens = -1;
    B.anchor = "laurent-lift";
    B.anisotropy_certified = true;
    if (n <= 0) return B;
    // C = Cay(B, t): lambda-valued and ramified
    ValuedConic C;
    C.C = cayley_dickson(B.C, FieldElement::uniformizer(F));
    size_t half = B.C.dim;
    for (auto& b : B.lat.basis) {
        Vec v = C.C.zero_vec();
        for (size_t i = 0; i < half; ++i) v[i] = b[i];
        C.lat.basis.push_back(v);
    }
    Vec j = C.C.basis(half);
    for (size_t t = 0; t < half; ++t) C.lat.basis.push_back(C.C.mul(C.lat.basis[t], j));
    C.lat.residue_gens = -1;
    C.lat.provenance = "prime doubling of a lifted division algebra";
    C.anchor = "laurent-chain";
    C.anisotropy_certified = true;
    return C;
}

} // namespace conival
