#include "conival/ksym.hpp"

#include "conival/sqclass.hpp"

namespace conival {

long kato_bound_m(const DescPtr& F) {
    Zinf e = e_F(F);
    if (e.is_infinity()) throw Unsupported("the filtration bound needs characteristic zero");
    return 2 * e.as_integer();
}

DepthK1 depth_k1(const FieldElement& x) {
    const DescPtr& F = x.desc;
    DepthK1 out;
    long v = x.val().as_integer();
    FieldElement pi = FieldElement::uniformizer(F);
    if (v % 2 != 0) {
        out.ramified = true;
        out.unit = x.div(pi.pow_int(v - 1));
        out.depth = 0;
        out.note = "odd valuation: tame-symbol component";
        return out;
    }
    out.unit = x.div(pi.pow_int(v));
    // the quadratic defect of the unit, via the norm exponent of <1>
    ValuedConic S = base_valued(F);
    auto r = norm_exponent(S, out.unit);
    if (r.infinite) {
        out.zero = true;
        out.note = "square witness found: trivial class";
        return out;
    }
    out.depth = r.nexp;
    return out;
}

Symbol pump(const DescPtr& F, long i, const FieldElement& a, long j, const FieldElement& b) {
    if (j < 1) throw PreconditionViolated("pump needs j >= 1");
    FieldElement pi = FieldElement::uniformizer(F);
    FieldElement one = FieldElement::one(F);
    FieldElement u = one.add(a.mul(pi.pow_int(i)));
    if (u.val() != Zinf::of(0)) throw PreconditionViolated("pump needs 1 + a pi^i a unit");
    FieldElement c = a.mul(b).div(u);
    FieldElement d = a.neg().mul(one.add(b.mul(pi.pow_int(j)))); // (-a (1 + b pi^j))^{p-1}, p = 2
    Symbol out;
    out.F = F;
    out.entries = {one.add(c.mul(pi.pow_int(i + j))), d.mul(pi.pow_int(i))};
    out.rewrite_log = {"pump i=" + std::to_string(i) + " j=" + std::to_string(j)};
    return out;
}

namespace {

struct GatherState {
    DescPtr F;
    FieldElement u;                   // head entry (unit)
    std::vector<FieldElement> units;  // unit tail entries
    std::optional<FieldElement> ram;  // at most one prime-valued tail entry
    std::vector<std::string> log;
};

// normalize an entry modulo squares so that its valuation is 0 or 1
FieldElement val_normalize(const DescPtr& F, const FieldElement& x, std::vector<std::string>& log) {
    long v = x.val().as_integer();
    long k = (v % 2 == 0) ? v : v - 1;
    if (k != 0) log.push_back("strip square pi^" + std::to_string(k));
    return x.div(FieldElement::uniformizer(F).pow_int(k));
}

std::vector<FieldElement> tail_residues(const GatherState& st) {
    std::vector<FieldElement> out;
    for (auto& a : st.units) out.push_back(a.residue());
    return out;
}

// module of squares of the inseparable closure generated by the residues;
// empty gens give k^2 itself
std::optional<std::vector<FieldElement>> in_sq_module(const FieldElement& target,
                                                      const std::vector<FieldElement>& gens) {
    std::vector<FieldElement> mg;
    int n = static_cast<int>(gens.size());
    for (int I = 0; I < (1 << n); ++I) {
        FieldElement p = FieldElement::one(target.desc);
        for (int i = 0; i < n; ++i)
            if ((I >> i) & 1) p = p.mul(gens[static_cast<size_t>(i)]);
        mg.push_back(p);
    }
    return sqclass::module_sqrt_coords(target, mg);
}

// Multiply `target` by norms N(1 - c sqrt(theta)) = 1 - c^2 theta of
// quadratic extensions that kill the tail, until the residue of the result
// is a square of the base residue field.  The residue bookkeeping happens in
// K-bar, where each factor multiplies the square root of the residue by
// (1 + c-bar sqrt(theta-bar)); the greedy loop drives the root into F-bar.
FieldElement rationalize_by_norms(const DescPtr& F, FieldElement target,
                                  const std::vector<FieldElement>& tail,
                                  std::vector<std::string>& log) {
    DescPtr rf = F->residue_desc();
    std::vector<FieldElement> gens;
    for (auto& a : tail) gens.push_back(a.residue());
    InsepExt K{rf, gens};
    auto theta_lift = [&](int M) {
        FieldElement t = FieldElement::one(F);
        for (size_t i = 0; i < tail.size(); ++i)
            if ((M >> i) & 1) t = t.mul(tail[i]);
        return t;
    };
    for (int guard = 0; guard < 64; ++guard) {
        auto y = square_in_K(K, target.residue());
        if (!y) throw InternalError("rationalize_by_norms: residue left the square module");
        std::vector<int> comps;
        for (int J = 0; J < K.dim(); ++J)
            if (!(*y)[static_cast<size_t>(J)].is_zero_at_precision()) comps.push_back(J);
        if (comps.empty()) throw InternalError("rationalize_by_norms: zero residue");
        if (comps.size() == 1 && comps[0] == 0) return target;
        if (comps.size() == 1) {
            // pure monomial: two paired factors rotate it into F-bar
            int J = comps[0];
            FieldElement th = theta_lift(J);
            FieldElement thbar = K.gen_square(J);
            FieldElement c2 = FieldElement::lift(F, thbar.inv());
            target = target.mul(FieldElement::one(F).sub(th))
                         .mul(FieldElement::one(F).sub(c2.mul(c2).mul(th)));
            log.push_back("norm pair rotating a pure monomial residue");
            continue;
        }
        // kill the last component against the first
        int J0 = comps[0], J1 = comps.back();
        int M = J0 ^ J1;
        FieldElement tau = K.gen_square(J0 & M); // theta^{J0 cap M}
        FieldElement c = (*y)[static_cast<size_t>(J1)]
                             .div((*y)[static_cast<size_t>(J0)].mul(tau));
        FieldElement cl = FieldElement::lift(F, c);
        target = target.mul(FieldElement::one(F).sub(cl.mul(cl).mul(theta_lift(M))));
        log.push_back("norm correction killing a root component");
    }
    throw ResidueDecisionUnknown("rationalization budget exhausted");
}

} // namespace

Gathered gather(const Symbol& g) {
    const DescPtr& F = g.F;
    long m = kato_bound_m(F);
    FieldElement pi = FieldElement::uniformizer(F);
    FieldElement one = FieldElement::one(F);
    Gathered out;
    out.log = g.rewrite_log;

    GatherState st{F, one, {}, std::nullopt, out.log};
    // 0) valuation-normalize, collecting at most one prime-valued entry
    std::vector<FieldElement> pool;
    for (auto& e : g.entries) pool.push_back(val_normalize(F, e, st.log));
    std::vector<FieldElement> rams;
    for (auto& e : pool) {
        if (e.val().as_integer() % 2 != 0) rams.push_back(e);
    }
    std::vector<FieldElement> units;
    for (auto& e : pool)
        if (e.val().as_integer() % 2 == 0) units.push_back(e);
    while (rams.size() >= 2) {
        // {x, y} = {-x y, y} merges two odd-valuation entries
        FieldElement merged = val_normalize(F, rams[0].neg().mul(rams[1]), st.log);
        st.log.push_back("steinberg merge of two prime-valued entries");
        units.push_back(merged);
        rams.erase(rams.begin());
    }
    if (!rams.empty()) st.ram = rams[0];

    // pick the head: the unit with the largest k1-depth
    if (units.empty()) {
        if (!st.ram) throw PreconditionViolated("empty symbol");
        // gamma = {pi w}: depth 0, tame-symbol component
        out.u = one;
        out.alpha = {*st.ram};
        out.depth = 0;
        out.form.depth = 0;
        out.form.component = "tame-symbol";
        out.form.data = {st.ram->residue().str()};
        out.has_ramified_tail = true;
        out.log = st.log;
        return out;
    }
    size_t best = 0;
    long bestd = -1;
    std::vector<DepthK1> dks;
    for (size_t i = 0; i < units.size(); ++i) {
        auto dk = depth_k1(units[i]);
        dks.push_back(dk);
        long d = dk.zero ? m + 1 : dk.depth;
        if (d > bestd) {
            bestd = d;
            best = i;
        }
    }
    st.u = units[best];
    units.erase(units.begin() + static_cast<long>(best));
    st.units = units;

    for (int guard = 0; guard < 4 * (static_cast<int>(m) + 4); ++guard) {
        DepthK1 dk = depth_k1(st.u);
        if (dk.zero) {
            // {square} kills the whole symbol
            out.zero = true;
            out.depth = m + 1;
            out.form.component = "zero";
            out.log = st.log;
            out.log.push_back("head entry became a square: the symbol vanishes");
            return out;
        }
        st.u = dk.unit;
        long d = dk.depth;
        // with odd head depth a prime-valued tail entry can be exchanged for
        // a unit one: {1 + b pi^d, pi w} = {1 + b pi^d, pi w (-b pi^d)^{-1}}
        if (d % 2 == 1 && d > 0 && st.ram) {
            FieldElement b = one.sub(st.u).div(pi.pow_int(d)).neg(); // u = 1 + b pi^d
            FieldElement adj = st.ram->div(b.neg().mul(pi.pow_int(d)));
            st.units.push_back(val_normalize(F, adj, st.log));
            st.ram.reset();
            st.log.push_back("odd depth: tail prime entry exchanged for a unit");
        }
        // alpha-reduction: tail unit residues must be 2-independent
        auto res = tail_residues(st);
        bool reduced = false;
        for (size_t i = 0; i < st.units.size() && !reduced; ++i) {
            std::vector<FieldElement> others;
            for (size_t t = 0; t < res.size(); ++t)
                if (t != i) others.push_back(res[t]);
            auto dep = in_sq_module(res[i], others);
            if (!dep) continue;
            // a_i lies in the square module of the other entries: drive its
            // residue into a plain square by tail-killing norm corrections
            std::vector<FieldElement> other_entries;
            for (size_t t = 0; t < st.units.size(); ++t)
                if (t != i) other_entries.push_back(st.units[t]);
            FieldElement adjusted = rationalize_by_norms(F, st.units[i], other_entries, st.log);
            FieldElement c0 = *sqrt_char2(adjusted.residue());
            FieldElement lift = FieldElement::lift(F, c0);
            adjusted = adjusted.div(lift.mul(lift));
            // adjusted = 1 + b' pi^j with j >= 1: pump into the head
            FieldElement deltap = adjusted.sub(one);
            if (deltap.is_zero_at_precision()) {
                st.units.erase(st.units.begin() + static_cast<long>(i));
                st.log.push_back("tail entry became trivial");
                reduced = true;
                break;
            }
            long jj = deltap.val().as_integer();
            FieldElement bp = deltap.div(pi.pow_int(jj));
            FieldElement bh = one.sub(st.u).div(pi.pow_int(d)).neg();
            Symbol pumped = pump(F, d, bh, jj, bp);
            st.u = pumped.entries[0];
            st.log.push_back(pumped.rewrite_log[0]);
            FieldElement ne = val_normalize(F, pumped.entries[1], st.log);
            st.units.erase(st.units.begin() + static_cast<long>(i));
            if (ne.val().as_integer() % 2 != 0) {
                if (st.ram) {
                    st.units.push_back(val_normalize(F, ne.neg().mul(*st.ram), st.log));
                    st.ram.reset();
                    st.log.push_back("steinberg merge after pump");
                } else {
                    st.ram = ne;
                }
            } else {
                st.units.push_back(ne);
            }
            reduced = true;
        }
        if (reduced) continue;
        // initial-form nonvanishing test at depth d
        auto res2 = tail_residues(st);
        DescPtr rf = F->residue_desc();
        auto mk_data = [&](const std::vector<FieldElement>& v) {
            std::vector<std::string> s;
            for (auto& e : v) s.push_back(e.str());
            return s;
        };
        if (d == 0) {
            if (st.ram) {
                // second summand: the tame symbol {u-bar, tail-bar}
                std::vector<FieldElement> second = {st.u.residue()};
                for (auto& r : res2) second.push_back(r);
                if (sqclass::p_independent(second)) {
                    out.form.component = "tame-symbol";
                    out.form.data = mk_data(second);
                    break;
                }
                // first summand: {u-bar, tail-bar, w-bar}
                std::vector<FieldElement> first = second;
                first.push_back(st.ram->residue());
                if (sqclass::p_independent(first)) {
                    out.form.component = "specialization";
                    out.form.data = mk_data(first);
                    break;
                }
            } else {
                std::vector<FieldElement> first = {st.u.residue()};
                for (auto& r : res2) first.push_back(r);
                if (sqclass::p_independent(first)) {
                    out.form.component = "specialization";
                    out.form.data = mk_data(first);
                    break;
                }
            }
            // vanishing at depth 0: u-bar lies in the square module of the tail
            auto dep = in_sq_module(st.u.residue(), res2);
            if (!dep) throw ResidueDecisionUnknown("depth-0 form vanished without a module certificate");
            st.u = rationalize_by_norms(F, st.u, st.units, st.log);
            FieldElement c0 = *sqrt_char2(st.u.residue());
            FieldElement lift = FieldElement::lift(F, c0);
            st.u = st.u.div(lift.mul(lift));
            st.log.push_back("depth-0 elimination raised the head depth");
            continue;
        }
        FieldElement b = one.sub(st.u).div(pi.pow_int(d)).neg(); // u = 1 + b pi^d
        FieldElement bbar = b.residue();
        if (d % 2 == 1) {
            // differential-form datum b-bar dlog(tail): nonzero iff the tail
            // residues are 2-independent (the head coefficient is a unit)
            if (sqclass::p_independent(res2)) {
                out.form.component = "differential";
                std::vector<FieldElement> data = {bbar};
                for (auto& r : res2) data.push_back(r);
                out.form.data = mk_data(data);
                break;
            }
            throw InternalError("dependent tail survived the alpha-reduction");
        }
        if (d < m) {
            // even depth below the bound: class in the quotient by exact forms
            if (st.ram) {
                // second summand over the unit tail
                if (sqclass::p_independent(res2)) {
                    InsepExt K{rf, res2};
                    if (!square_in_K(K, bbar)) {
                        out.form.component = "quotient-differential-second";
                        std::vector<FieldElement> data = {bbar};
                        for (auto& r : res2) data.push_back(r);
                        out.form.data = mk_data(data);
                        break;
                    }
                }
            } else {
                if (sqclass::p_independent(res2)) {
                    InsepExt K{rf, res2};
                    if (!square_in_K(K, bbar)) {
                        out.form.component = "quotient-differential";
                        std::vector<FieldElement> data = {bbar};
                        for (auto& r : res2) data.push_back(r);
                        out.form.data = mk_data(data);
                        break;
                    }
                }
            }
            // vanishing: b-bar is a square in the residue extension of the
            // tail; eliminate as in the division step and lift the depth
            InsepExt K{rf, res2};
            auto dep = square_in_K(K, bbar);
            if (!dep) throw ResidueDecisionUnknown("even-depth datum vanished without a certificate");
            FieldElement corr = one;
            for (int I = 1; I < K.dim(); ++I) {
                const FieldElement& cI = (*dep)[static_cast<size_t>(I)];
                if (cI.is_zero_certified() || cI.is_zero_at_precision()) continue;
                FieldElement theta = one;
                for (size_t t = 0; t < st.units.size(); ++t)
                    if ((I >> t) & 1) theta = theta.mul(st.units[t]);
                FieldElement cl = FieldElement::lift(F, cI);
                corr = corr.mul(one.sub(cl.mul(cl).mul(theta).mul(pi.pow_int(d))));
            }
            if (!corr.is_one()) {
                st.u = st.u.mul(corr.inv());
                st.log.push_back("norm correction at even depth " + std::to_string(d));
            }
            // now the remaining coefficient residue is a plain square
            FieldElement b2 = one.sub(st.u).div(pi.pow_int(d)).neg();
            auto c0 = sqrt_char2(b2.residue());
            if (!c0) throw InternalError("square residue expected after the even-depth correction");
            FieldElement cl = FieldElement::lift(F, *c0);
            // (1 + c pi^{d/2})^2 absorbs the leading term
            FieldElement sq = one.add(cl.mul(pi.pow_int(d / 2)));
            st.u = st.u.div(sq.mul(sq));
            st.log.push_back("square absorption at even depth " + std::to_string(d));
            continue;
        }
        // d = m: the Artin-Schreier-twisted summand; the datum is
        // b-bar * eps-bar with eps = pi^m / 4
        FieldElement eps = pi.pow_int(m).div(FieldElement::from_int(F, 4));
        FieldElement datum = b.mul(eps).residue();
        if (!sqclass::p_independent(res2))
            throw InternalError("dependent tail at the top depth");
        InsepExt K{rf, res2};
        auto s = coeff_form(K);
        auto as = in_AS_image(K, s, datum);
        if (as.status == ASStatus::Unknown)
            throw ResidueDecisionUnknown("top-depth datum undecided");
        if (as.status == ASStatus::NotMember) {
            out.form.component = st.ram ? "artin-schreier-second" : "artin-schreier";
            std::vector<FieldElement> data = {datum};
            for (auto& r : res2) data.push_back(r);
            out.form.data = mk_data(data);
            break;
        }
        out.zero = true;
        out.depth = m + 1;
        out.form.component = "zero";
        out.log = st.log;
        out.log.push_back("top-depth datum inside the Artin-Schreier image: zero class");
        return out;
    }
    DepthK1 final = depth_k1(st.u);
    if (final.zero) {
        out.zero = true;
        out.depth = m + 1;
        out.form.component = "zero";
        out.log = st.log;
        return out;
    }
    out.u = final.unit;
    out.depth = final.depth;
    out.form.depth = final.depth;
    out.alpha = st.units;
    if (st.ram) {
        out.alpha.push_back(*st.ram);
        out.has_ramified_tail = true;
    }
    out.log = st.log;
    // postcondition: depth{u} = depth gamma and depth alpha = 0 (the tail
    // residues are 2-independent by construction)
    return out;
}

long depth_of(const Symbol& g) {
    auto r = gather(g);
    return r.zero ? kato_bound_m(g.F) + 1 : r.depth;
}

int e_gamma(const Symbol& g) {
    auto r = gather(g);
    if (r.zero) return 1;
    if (r.depth % 2 == 1) return 2;
    if (r.form.component == "tame-symbol" || r.form.component == "quotient-differential-second" ||
        r.form.component == "artin-schreier-second")
        return 2;
    return 1;
}

ValuedConic symbol_algebra(const Gathered& g, const DescPtr& F) {
    if (g.zero) throw PreconditionViolated("zero symbol has no anisotropic algebra");
    // tail units first (depth-0 steps), then the head, then the prime entry
    ValuedConic P = base_valued(F);
    for (auto& a : g.alpha) {
        if (a.val().as_integer() % 2 != 0) continue; // prime tail handled last
        P = enlarge(P, a);
    }
    if (!(g.u.val() == Zinf::of(0)) || g.u.is_one()) {
        // head trivial: nothing to add
    } else {
        P = enlarge(P, g.u);
    }
    if (g.has_ramified_tail) {
        FieldElement prime = g.alpha.back();
        P = enlarge(P, prime);
    }
    return P;
}

LntReport lnt_k(const Symbol& g, const FieldElement& a) {
    LntReport out;
    const DescPtr& F = g.F;
    long m = kato_bound_m(F);
    auto gg = gather(g);
    out.depth_gamma = gg.zero ? m + 1 : gg.depth;
    Symbol prod;
    prod.F = F;
    prod.entries = {a};
    for (auto& e : g.entries) prod.entries.push_back(e);
    auto gp = gather(prod);
    out.product_zero = gp.zero;
    out.depth_product = gp.zero ? m + 1 : gp.depth;
    // norm exponent through the algebra side (wild index-1 cases)
    if (!gg.zero) {
        ValuedConic C = symbol_algebra(gg, F);
        auto ram = ramification_and_residue(C);
        if (ram.e == 1 && ram.wild) {
            auto nx = norm_exponent(C, a);
            out.nexp_infinite = nx.infinite;
            out.nexp = nx.infinite ? 0 : nx.nexp;
            if (!nx.infinite)
                out.inequality_ok = (out.nexp + out.depth_gamma <= out.depth_product);
            else
                out.inequality_ok = out.product_zero;
        } else {
            out.inequality_ok = true; // inequality checked only on decidable instances
        }
    } else {
        out.inequality_ok = true;
    }
    return out;
}

DictReport dictionary_check(const Symbol& g) {
    DictReport out;
    const DescPtr& F = g.F;
    long m = kato_bound_m(F);
    long lam2 = m / 2;
    auto gg = gather(g);
    if (gg.zero) {
        out.detail = "zero symbol: the corresponding form is isotropic";
        bool threw = false;
        try {
            symbol_algebra(gg, F);
        } catch (const Error&) {
            threw = true;
        }
        out.ok = threw;
        return out;
    }
    out.depth = gg.depth;
    Symbol norm;
    norm.F = F;
    norm.entries = g.entries;
    out.e_sym = e_gamma(norm);
    ValuedConic C = symbol_algebra(gg, F);
    auto ram = ramification_and_residue(C);
    auto tex = trace_exponent(C);
    auto om = omega_invariant(C);
    out.e_alg = ram.e;
    out.tex = tex.tex;
    out.omega = om.omega.str();
    out.tame = !ram.wild;
    if (C.C.dim >= 2 && C.C.dim <= 8) {
        try {
            out.type = classify_type(C);
        } catch (const Error&) {
            out.type = "n/a";
        }
    } else {
        out.type = "n/a";
    }
    bool ok = true;
    ok = ok && (out.e_sym == out.e_alg);
    ok = ok && (out.tex == lam2 - out.depth / 2);
    ok = ok && (out.tame == (out.depth == m));
    ok = ok && (om.omega.twice() == 2 * lam2 - out.depth);
    if (out.type != "n/a") {
        bool primary_expected = (out.e_sym == 2 && out.depth % 2 == 0);
        ok = ok && (primary_expected == (out.type == "primary"));
    }
    out.ok = ok;
    if (!ok) out.detail = "dictionary mismatch";
    return out;
}

} // namespace conival
