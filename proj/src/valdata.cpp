#include "conival/valdata.hpp"

#include <algorithm>
#include <random>

#include "conival/sqclass.hpp"

namespace conival {

Zinf lambda_Q(const ValuedConic& S, const Vec& x) {
    FieldElement nx = S.C.n(x);
    if (nx.is_zero_certified()) return Zinf::infinity();
    return Zinf::halves(nx.val().as_integer());
}

Vec lattice_coords(const ValuedConic& S, const Vec& x) {
    const DescPtr& F = S.C.field;
    size_t n = S.C.dim;
    Mat a(n, Vec(S.lat.basis.size(), FieldElement::zero(F)));
    for (size_t j = 0; j < S.lat.basis.size(); ++j)
        for (size_t i = 0; i < n; ++i) a[i][j] = S.lat.basis[j][i];
    auto sol = solve_linear(F, a, x);
    if (!sol) throw InternalError("lattice basis does not span the space");
    return *sol;
}

RamResidue ramification_and_residue(const ValuedConic& S) {
    if (S.lat.basis.empty()) throw NoLatticeBasis(S.anchor);
    RamResidue out;
    out.residue_field = S.C.field->residue_desc();
    bool has_half = false;
    for (size_t i = 0; i < S.lat.basis.size(); ++i) {
        Zinf l = lambda_Q(S, S.lat.basis[i]);
        if (l == Zinf::of(0)) {
            out.unit_idx.push_back(i);
        } else if (l.twice() == 1) {
            has_half = true;
        } else {
            throw InternalError("lattice basis vector with lambda outside [0,1)");
        }
    }
    out.e = has_half ? 2 : 1;
    out.f = static_cast<int>(out.unit_idx.size());
    if (static_cast<size_t>(out.e * out.f) != S.C.dim)
        throw InternalError("e * f != dim on the attached lattice");
    // residue form on the unit part
    const DescPtr& rf = out.residue_field;
    out.residue_form.field = rf;
    out.residue_form.dim = out.unit_idx.size();
    out.residue_form.coef = mat_zero(rf, out.residue_form.dim, out.residue_form.dim);
    for (size_t a = 0; a < out.unit_idx.size(); ++a) {
        const Vec& va = S.lat.basis[out.unit_idx[a]];
        out.residue_form.coef[a][a] = S.C.n(va).residue();
        for (size_t b = a + 1; b < out.unit_idx.size(); ++b) {
            const Vec& vb = S.lat.basis[out.unit_idx[b]];
            out.residue_form.coef[a][b] = S.C.n2(va, vb).residue();
        }
    }
    // base point: the unit of C sits in the lattice
    Vec unit_coords = lattice_coords(S, S.C.unit);
    Vec bp(out.residue_form.dim, FieldElement::zero(rf));
    for (size_t a = 0; a < out.unit_idx.size(); ++a) bp[a] = unit_coords[out.unit_idx[a]].residue();
    out.residue_form.base_point = bp;
    // wildness: residue trace identically zero
    out.wild = true;
    for (size_t a = 0; a < out.unit_idx.size() && out.wild; ++a)
        out.wild = out.residue_form.polar(*out.residue_form.base_point,
                                          out.residue_form.unit_vector(a))
                       .is_zero_at_precision();
    return out;
}

TexResult trace_exponent(const ValuedConic& S) {
    if (S.lat.basis.empty()) throw NoLatticeBasis(S.anchor);
    TexResult out;
    std::optional<long> best;
    size_t best_i = 0;
    for (size_t i = 0; i < S.lat.basis.size(); ++i) {
        FieldElement t = S.C.tr(S.lat.basis[i]);
        if (t.is_zero_certified()) continue;
        long v;
        try {
            v = t.val().as_integer();
        } catch (const PrecisionExhausted&) {
            continue; // trace hidden below precision; cannot attain the minimum here
        }
        if (!best || v < *best) {
            best = v;
            best_i = i;
        }
    }
    if (!best) throw PrecisionExhausted("trace ideal invisible at current precision");
    out.tex = *best;
    // normalize: w0 = (pi^tex / t(b)) b so that t(w0) = pi^tex
    const DescPtr& F = S.C.field;
    FieldElement pit = FieldElement::uniformizer(F).pow_int(out.tex);
    FieldElement c = pit.div(S.C.tr(S.lat.basis[best_i]));
    out.w0 = S.C.smul(c, S.lat.basis[best_i]);
    out.lambda_w0 = lambda_Q(S, out.w0);
    return out;
}

OmegaResult omega_invariant(const ValuedConic& S) {
    TexResult tex = trace_exponent(S);
    auto ram = ramification_and_residue(S);
    OmegaResult out;
    auto phi = [&](const Vec& x) -> std::optional<Zinf> {
        FieldElement t = S.C.tr(x);
        if (t.is_zero_certified()) return std::nullopt;
        try {
            Zinf lt = Zinf::of(t.val().as_integer());
            Zinf lq = lambda_Q(S, x);
            return lt - lq;
        } catch (const PrecisionExhausted&) {
            return std::nullopt;
        }
    };
    std::vector<Vec> witnesses = S.lat.basis;
    for (auto& [k, v] : S.lat.marks) witnesses.push_back(v);
    witnesses.push_back(tex.w0);
    std::optional<Zinf> best;
    Vec best_w;
    for (auto& w : witnesses) {
        auto p = phi(w);
        if (p && (!best || *p < *best)) {
            best = *p;
            best_w = w;
        }
    }
    if (!best) throw PrecisionExhausted("omega witness set empty at current precision");
    Zinf texZ = Zinf::of(tex.tex);
    Zinf texHalf = Zinf::halves(2 * tex.tex - 1);
    if (*best == texHalf) {
        out.omega = texHalf;
        out.certificate = "witness attains tex - 1/2, minimal by the two-value dichotomy";
    } else if (*best == texZ) {
        if (ram.e == 1) {
            out.omega = texZ;
            out.certificate = "ramification index 1 forces omega = tex";
        } else if (tex.tex == 0) {
            out.omega = texZ;
            out.certificate = "0 <= omega <= tex = 0";
        } else if (S.type_provenance && *S.type_provenance == "primary") {
            out.omega = texZ;
            out.certificate = "primary type forces omega = tex";
        } else {
            out.omega = texZ;
            out.certificate = "witness-set minimum equals tex; tex - 1/2 unattained on the attached witnesses";
        }
    } else {
        throw InternalError("omega outside the dichotomy {tex, tex - 1/2}");
    }
    out.witness = best_w;
    // a normalized regular trace generator: scale the omega witness so that
    // its trace is pi^tex; then lambda_Q = tex - omega as required
    const DescPtr& F = S.C.field;
    FieldElement c = FieldElement::uniformizer(F).pow_int(tex.tex).div(S.C.tr(best_w));
    out.regular_w0 = S.C.smul(c, best_w);
    Zinf lw = lambda_Q(S, out.regular_w0);
    if (!(lw == texZ - out.omega))
        throw InternalError("regular trace generator failed lambda check");
    return out;
}

InsepExt residue_insep_ext(const ValuedConic& S) {
    auto ram = ramification_and_residue(S);
    if (!ram.wild) throw PreconditionViolated("residue field structure needs a wild space");
    int n = S.lat.residue_gens;
    if ((1 << n) != ram.f) throw InternalError("residue generator count inconsistent with f");
    InsepExt K{ram.residue_field, {}};
    for (int t = 0; t < n; ++t) {
        size_t idx = ram.unit_idx[static_cast<size_t>(1 << t)];
        K.gens.push_back(S.C.n(S.lat.basis[idx]).residue());
    }
    // the attached basis must realize the monomial structure: n-bar of the
    // I-th unit vector is the corresponding product of generators (this is
    // the multiplicativity of norms on the purely inseparable residue field)
    for (int I = 0; I < (1 << n); ++I) {
        FieldElement expect = K.gen_square(I);
        FieldElement got = S.C.n(S.lat.basis[ram.unit_idx[static_cast<size_t>(I)]]).residue();
        if (!got.equals(expect)) throw InternalError("residue basis is not monomial-structured");
    }
    return K;
}

UnitalForm residue_s_w0(const ValuedConic& S, const Vec& w0, long tex) {
    auto ram = ramification_and_residue(S);
    const DescPtr& F = S.C.field;
    UnitalForm s;
    s.row.assign(ram.unit_idx.size(), FieldElement::zero(ram.residue_field));
    FieldElement pit = FieldElement::uniformizer(F).pow_int(-tex);
    for (size_t a = 0; a < ram.unit_idx.size(); ++a) {
        FieldElement v = pit.mul(S.C.n2(S.lat.basis[ram.unit_idx[a]], w0));
        s.row[a] = v.residue();
    }
    if (!s.row[0].is_one()) throw InternalError("s_w0 is not unital on the attached basis");
    return s;
}

NexpResult norm_exponent(const ValuedConic& S, const FieldElement& alpha) {
    NexpResult out;
    const DescPtr& F = S.C.field;
    if (alpha.val() != Zinf::of(0)) throw PreconditionViolated("norm exponent needs a unit");
    auto ram = ramification_and_residue(S);
    TexResult tex = trace_exponent(S);
    if (!(S.C.dim == 1 || (ram.e == 1 && ram.wild)))
        throw PreconditionViolated("norm exponent implemented for wild spaces of ramification index 1");
    OmegaResult om = omega_invariant(S);
    long two_omega = om.omega.twice(); // omega = tex here, so this is 2 tex
    FieldElement pi = FieldElement::uniformizer(F);
    FieldElement x = alpha;
    long prev_d = -1;
    for (int guard = 0; guard < 256; ++guard) {
        FieldElement delta = x.sub(FieldElement::one(F));
        if (delta.is_zero_at_precision()) {
            out.infinite = true;
            out.certificate = "norm witness to stored precision";
            return out;
        }
        long d = delta.val().as_integer();
        if (d <= prev_d)
            throw InternalError("norm exponent correction made no progress at defect " +
                                std::to_string(d));
        prev_d = d;
        if (d > two_omega) {
            // local norm theorem: 1 - pi^{2 omega + 1} beta is always a norm
            FieldElement beta = delta.neg().div(pi.pow_int(two_omega + 1));
            FieldElement gamma = local_norm_certificate(S, beta);
            Vec y = S.C.add(S.C.unit, S.C.smul(pi.pow_int(tex.tex).mul(gamma), om.regular_w0));
            out.norm_factors.push_back(y);
            x = x.div(S.C.n(y));
            FieldElement resid = x.sub(FieldElement::one(F));
            if (!resid.is_zero_at_precision())
                throw InternalError("local norm certificate did not close the loop");
            out.infinite = true;
            out.certificate = "local norm theorem bound";
            return out;
        }
        FieldElement beta = delta.neg().div(pi.pow_int(d));
        if (d % 2 == 1) {
            if (beta.val() != Zinf::of(0)) throw InternalError("odd defect with non-unit beta");
            out.nexp = d;
            out.certificate = "odd defect with unit coefficient";
            return out;
        }
        long m = d / 2;
        if (m < tex.tex) {
            // beta-bar must be a square in the residue field structure
            FieldElement bbar = beta.residue();
            std::vector<FieldElement> gens;
            for (auto idx : ram.unit_idx) gens.push_back(S.C.n(S.lat.basis[idx]).residue());
            auto lam = sqclass::module_sqrt_coords(bbar, gens);
            if (!lam) {
                out.nexp = d;
                out.certificate = "even defect with residue outside the squares of the residue field";
                return out;
            }
            // lift w-bar and multiply the norm accumulator by n(1 - pi^m w)
            Vec w = S.C.zero_vec();
            for (size_t a = 0; a < ram.unit_idx.size(); ++a) {
                FieldElement l = (*lam)[a];
                if (l.is_zero_certified()) continue;
                w = S.C.add(w, S.C.smul(FieldElement::lift(F, l), S.lat.basis[ram.unit_idx[a]]));
            }
            Vec v = S.C.sub(S.C.unit, S.C.smul(pi.pow_int(m), w));
            out.norm_factors.push_back(v);
            FieldElement nv = S.C.n(v);
            x = x.div(nv);
            continue;
        }
        // d = 2 tex: the tame-enlargement criterion via the Artin-Schreier image
        FieldElement beta0 = S.C.n(om.regular_w0).mul(beta);
        InsepExt Kb = residue_insep_ext(S);
        UnitalForm sb = residue_s_w0(S, om.regular_w0, tex.tex);
        auto as = in_AS_image(Kb, sb, beta0.residue());
        if (as.status == ASStatus::Unknown)
            throw ResidueDecisionUnknown("artin-schreier decision for the defect loop");
        if (as.status == ASStatus::NotMember) {
            out.nexp = d;
            out.certificate = "defect 2 tex with Artin-Schreier obstruction over the residue field";
            return out;
        }
        // member: w = (lift of the witness) * w0 raises the defect
        Vec w = S.C.zero_vec();
        for (size_t a = 0; a < ram.unit_idx.size(); ++a) {
            FieldElement l = (*as.witness)[a];
            if (l.is_zero_certified()) continue;
            w = S.C.add(w, S.C.smul(FieldElement::lift(F, l), S.lat.basis[ram.unit_idx[a]]));
        }
        Vec wv = S.C.mul(w, om.regular_w0);
        Vec v = S.C.sub(S.C.unit, S.C.smul(pi.pow_int(m), wv));
        out.norm_factors.push_back(v);
        x = x.div(S.C.n(v));
    }
    throw InternalError("norm exponent loop exceeded the theorem bound");
}

FieldElement local_norm_certificate(const ValuedConic& S, const FieldElement& beta) {
    const DescPtr& F = S.C.field;
    TexResult tex = trace_exponent(S);
    OmegaResult om = omega_invariant(S);
    const Vec& w0 = om.regular_w0;
    long d = (Zinf::of(tex.tex) - om.omega).twice(); // 2 (tex - omega) in {0, 1}
    FieldElement pi = FieldElement::uniformizer(F);
    FieldElement a0 = pi.pow_int(1 - d).mul(S.C.n(w0));
    FieldElement delta = hensel_quadratic(a0, FieldElement::one(F), beta);
    FieldElement gamma = pi.pow_int(1 - d).mul(delta);
    // recheck the identity 1 - pi^{2 omega + 1} beta = n(1 + pi^tex gamma w0)
    Vec y = S.C.add(S.C.unit, S.C.smul(pi.pow_int(tex.tex).mul(gamma), w0));
    FieldElement lhs = FieldElement::one(F).sub(pi.pow_int(om.omega.twice() + 1).mul(beta));
    if (!S.C.n(y).sub(lhs).is_zero_at_precision())
        throw InternalError("local norm certificate failed recheck");
    return gamma;
}

HeightsResult heights(const ValuedConic& S, int lower_bound_samples, uint64_t seed) {
    HeightsResult out;
    if (S.C.dim <= 2) {
        out.hcom = Zinf::infinity();
        out.hass = Zinf::infinity();
        return out;
    }
    OmegaResult om = omega_invariant(S);
    auto hcom_of = [&](const Vec& x, const Vec& y) -> std::optional<Zinf> {
        Vec c = S.C.commutator(x, y);
        FieldElement nc = S.C.n(c);
        if (nc.is_zero_certified()) return std::nullopt;
        try {
            return Zinf::halves(nc.val().as_integer()) - lambda_Q(S, x) - lambda_Q(S, y);
        } catch (const PrecisionExhausted&) {
            return std::nullopt;
        }
    };
    auto hass_of = [&](const Vec& x, const Vec& y, const Vec& z) -> std::optional<Zinf> {
        Vec a = S.C.associator(x, y, z);
        FieldElement na = S.C.n(a);
        if (na.is_zero_certified()) return std::nullopt;
        try {
            return Zinf::halves(na.val().as_integer()) - lambda_Q(S, x) - lambda_Q(S, y) -
                   lambda_Q(S, z);
        } catch (const PrecisionExhausted&) {
            return std::nullopt;
        }
    };
    auto itx = S.lat.marks.find("hcom1");
    auto ity = S.lat.marks.find("hcom2");
    if (itx == S.lat.marks.end() || ity == S.lat.marks.end())
        throw NoLatticeBasis("height witnesses not attached by the constructor");
    auto h = hcom_of(itx->second, ity->second);
    if (!h || !(*h == om.omega))
        throw InternalError("commutative height witness does not attain omega");
    out.hcom = *h;
    out.com_pair = {itx->second, ity->second};
    // sampled lower bound: the witness value is the minimum
    std::mt19937_64 rng(seed);
    for (int t = 0; t < lower_bound_samples; ++t) {
        Vec x = S.C.zero_vec(), y = S.C.zero_vec();
        for (size_t i = 0; i < S.C.dim; ++i) {
            if (rng() % 2) x = S.C.add(x, S.lat.basis[rng() % S.lat.basis.size()]);
            if (rng() % 2) y = S.C.add(y, S.lat.basis[rng() % S.lat.basis.size()]);
        }
        auto hv = hcom_of(x, y);
        if (hv && *hv < om.omega) throw InternalError("sampled pair beats omega lower bound");
    }
    if (S.C.dim == 8) {
        auto itz = S.lat.marks.find("hass3");
        if (itz == S.lat.marks.end())
            throw NoLatticeBasis("associator height witness not attached");
        auto ha = hass_of(itx->second, ity->second, itz->second);
        if (!ha || !(*ha == om.omega))
            throw InternalError("associative height witness does not attain omega");
        out.hass = *ha;
        out.ass_triple = {itx->second, ity->second, itz->second};
        for (int t = 0; t < lower_bound_samples; ++t) {
            Vec x = S.C.zero_vec(), y = S.C.zero_vec(), z = S.C.zero_vec();
            for (size_t i = 0; i < 3; ++i) {
                x = S.C.add(x, S.lat.basis[rng() % S.lat.basis.size()]);
                y = S.C.add(y, S.lat.basis[rng() % S.lat.basis.size()]);
                z = S.C.add(z, S.lat.basis[rng() % S.lat.basis.size()]);
            }
            auto hv = hass_of(x, y, z);
            if (hv && *hv < om.omega) throw InternalError("sampled triple beats omega lower bound");
        }
    } else {
        out.hass = Zinf::infinity(); // quaternions are associative
    }
    return out;
}

std::string classify_type(const ValuedConic& S) {
    auto ram = ramification_and_residue(S);
    TexResult tex = trace_exponent(S);
    std::string by_omega;
    if (!ram.wild) {
        by_omega = (ram.e == 2) ? "primary" : "unitary";
    } else if (ram.e == 1) {
        by_omega = "unitary";
    } else {
        OmegaResult om = omega_invariant(S);
        by_omega = (om.omega == Zinf::of(tex.tex)) ? "primary" : "unitary";
    }
    if (S.type_provenance && *S.type_provenance != by_omega)
        throw InternalError("type dichotomy violated: provenance " + *S.type_provenance +
                            " vs omega route " + by_omega);
    return by_omega;
}

LambdaNormedReport lambda_normed_check(const ValuedConic& S, int samples, uint64_t seed) {
    LambdaNormedReport out;
    // o_C closed under multiplication on basis pairs
    for (auto& a : S.lat.basis)
        for (auto& b : S.lat.basis) {
            Zinf l = lambda_Q(S, S.C.mul(a, b));
            if (l < Zinf::of(0)) {
                out.detail = "lattice not closed under multiplication";
                return out;
            }
        }
    // p_C ideal with p_C^2 inside pi o_C: sampled on scaled basis pairs
    auto ram = ramification_and_residue(S);
    std::mt19937_64 rng(seed);
    FieldElement pi = FieldElement::uniformizer(S.C.field);
    auto rnd_p = [&]() {
        // a p_C element: pi * lattice vector or a basis vector of value 1/2
        Vec v = S.C.smul(pi, S.lat.basis[rng() % S.lat.basis.size()]);
        for (size_t i = 0; i < S.lat.basis.size(); ++i) {
            if (lambda_Q(S, S.lat.basis[i]).twice() == 1 && rng() % 2)
                v = S.C.add(v, S.lat.basis[i]);
        }
        return v;
    };
    for (int t = 0; t < samples; ++t) {
        Vec a = rnd_p(), b = rnd_p();
        Zinf l = lambda_Q(S, S.C.mul(a, b));
        if (l < Zinf::of(1)) {
            out.detail = "p_C^2 escapes pi o_C";
            return out;
        }
    }
    out.lambda_normed = true;
    // lambda-valued: multiplicativity of lambda_C on sampled unit pairs; with
    // e = 1 this is equivalent to the residue algebra being division
    for (int t = 0; t < samples; ++t) {
        Vec a = S.C.zero_vec(), b = S.C.zero_vec();
        for (size_t i = 0; i < S.lat.basis.size(); ++i) {
            if (rng() % 2) a = S.C.add(a, S.lat.basis[i]);
            if (rng() % 2) b = S.C.add(b, S.lat.basis[i]);
        }
        try {
            Zinf la = lambda_Q(S, a), lb = lambda_Q(S, b);
            Zinf lab = lambda_Q(S, S.C.mul(a, b));
            if (!(lab == la + lb)) {
                out.detail = "lambda fails multiplicativity on a sampled pair";
                out.lambda_valued = false;
                return out;
            }
        } catch (const PrecisionExhausted&) {
            continue;
        }
    }
    // certified route when e = 1: residue algebra must be a division algebra;
    // the wild residue is a purely inseparable field, whose nonzero elements
    // have nonzero norms n-bar = squares
    if (ram.e == 1 && ram.wild) {
        out.lambda_valued = true;
        out.detail = "e=1 and wild: residue is a purely inseparable field";
    } else {
        out.lambda_valued = true;
        out.detail = "sampled multiplicativity";
    }
    return out;
}

Vec residue_coords(const ValuedConic& S, const Vec& x) {
    auto ram = ramification_and_residue(S);
    Vec lc = lattice_coords(S, x);
    Vec out(ram.unit_idx.size(), FieldElement::zero(ram.residue_field));
    for (size_t a = 0; a < ram.unit_idx.size(); ++a) out[a] = lc[ram.unit_idx[a]].residue();
    return out;
}

} // namespace conival
