#include "conival/field.hpp"

#include <algorithm>
#include <sstream>

namespace conival {

// ---------------------------------------------------------------------------
// descriptors

int FieldDescriptor::gf_degree() const {
    if (kind == FieldKind::GF2k) return k;
    if (kind == FieldKind::RatFun) return sub->gf_degree();
    throw Unsupported("gf_degree on a valued kind");
}

DescPtr FieldDescriptor::residue_desc() const {
    switch (kind) {
        case FieldKind::Laurent:
        case FieldKind::Teich: return sub;
        case FieldKind::Eis2: return sub->residue_desc();
        default: throw Unsupported("residue field of an exact kind");
    }
}

std::string FieldDescriptor::name() const {
    std::ostringstream os;
    switch (kind) {
        case FieldKind::GF2k:
            if (k == 1) os << "gf(2)";
            else os << "gf(2^" << k << ")";
            break;
        case FieldKind::RatFun: {
            os << "ratfun(" << sub->name() << "; ";
            for (size_t i = 0; i < vars.size(); ++i) os << (i ? "," : "") << vars[i];
            os << ")";
            break;
        }
        case FieldKind::Laurent: os << "laurent(" << sub->name() << "; prec=" << prec << ")"; break;
        case FieldKind::Teich: os << "teich(" << sub->name() << "; prec=" << prec << ")"; break;
        case FieldKind::Eis2: os << "eis2(" << sub->name() << "; u=" << (eis_u ? eis_u->str() : "?") << ")"; break;
    }
    return os.str();
}

DescPtr make_gf(int k) {
    if (k < 1 || k > 16) throw Unsupported("gf(2^k) needs 1 <= k <= 16");
    auto d = std::make_shared<FieldDescriptor>();
    d->kind = FieldKind::GF2k;
    d->k = k;
    return d;
}

DescPtr make_ratfun(DescPtr gf_base, std::vector<std::string> vars, int degree_budget) {
    if (!gf_base || gf_base->kind != FieldKind::GF2k)
        throw Unsupported("ratfun base must be gf(2^k)");
    if (vars.empty() || vars.size() > 3) throw Unsupported("ratfun supports 1..3 variables");
    auto d = std::make_shared<FieldDescriptor>();
    d->kind = FieldKind::RatFun;
    d->sub = std::move(gf_base);
    d->vars = std::move(vars);
    d->k = d->sub->k;
    d->degree_budget = degree_budget;
    return d;
}

static void check_residue_kind(const DescPtr& r) {
    if (!r || !r->is_exact())
        throw Unsupported("residue descriptor must be gf(2^k) or ratfun");
}

DescPtr make_laurent(DescPtr residue, int prec, int degree_budget) {
    check_residue_kind(residue);
    if (prec < 4) throw PreconditionViolated("laurent precision must be >= 4");
    auto d = std::make_shared<FieldDescriptor>();
    d->kind = FieldKind::Laurent;
    d->sub = std::move(residue);
    d->prec = prec;
    d->degree_budget = degree_budget;
    d->k = d->sub->gf_degree();
    return d;
}

DescPtr make_teich(DescPtr residue, int prec, int degree_budget) {
    check_residue_kind(residue);
    if (prec < 4) throw PreconditionViolated("teich precision must be >= 4");
    if (prec > 60) throw Unsupported("teich precision capped at 60 bits");
    auto d = std::make_shared<FieldDescriptor>();
    d->kind = FieldKind::Teich;
    d->sub = std::move(residue);
    d->prec = prec;
    d->degree_budget = degree_budget;
    d->k = d->sub->gf_degree();
    return d;
}

DescPtr make_eis2(DescPtr teich_base, const FieldElement& unit) {
    if (!teich_base || teich_base->kind != FieldKind::Teich)
        throw Unsupported("eis2 base must be a teich kind");
    if (unit.val() != Zinf::of(0)) throw PreconditionViolated("eis2 parameter must be a unit");
    auto d = std::make_shared<FieldDescriptor>();
    d->kind = FieldKind::Eis2;
    d->sub = teich_base;
    d->prec = teich_base->prec;
    d->degree_budget = teich_base->degree_budget;
    d->eis_u = std::make_shared<FieldElement>(unit);
    return d;
}

bool same_descriptor(const DescPtr& a, const DescPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->name() == b->name();
}

// ---------------------------------------------------------------------------
// coefficient-ring helpers

static GF2Ring gfring(const DescPtr& d) { return GF2Ring{d->gf_degree()}; }
static Z2Ring z2ring(int bits) { return Z2Ring{bits}; }

// 0/1 lift of the GF(2^k) modulus as a polynomial in the Galois variable.
static MPoly<Z2Ring> galois_modulus_lift(int k, const Z2Ring& R) {
    MPoly<Z2Ring> h;
    uint64_t m = gf2k::modulus_for(k);
    for (int i = 0; i <= k; ++i)
        if ((m >> i) & 1) poly_add_term(R, h, mono_var(kGaloisVar, i), R.one());
    return h;
}

static void teich_reduce_galois(MPoly<Z2Ring>& p, int k, const Z2Ring& R) {
    if (k <= 1) return;
    if (p.deg_in(kGaloisVar) < k) return;
    auto h = galois_modulus_lift(k, R);
    p = poly_divmod_monic(R, p, h, kGaloisVar).second;
}

static int content2(const MPoly<Z2Ring>& p, const Z2Ring& R) {
    int c = R.nbits;
    for (auto& [m, v] : p.terms) c = std::min(c, R.val2(v));
    return c;
}

static MPoly<Z2Ring> shift2_down(const MPoly<Z2Ring>& p, int c, const Z2Ring& R) {
    MPoly<Z2Ring> r;
    for (auto& [m, v] : p.terms) {
        uint64_t w = (v & R.mask()) >> c;
        if (w) r.terms.emplace(m, w);
    }
    return r;
}

// Reduce a Z/2^N polynomial mod 2 into a GF(2^k) polynomial over the
// user variables (the Galois variable collapses into the coefficient).
static MPoly<GF2Ring> mod2_poly(const MPoly<Z2Ring>& p, const GF2Ring& G) {
    MPoly<GF2Ring> r;
    for (auto& [m, v] : p.terms) {
        if (!(v & 1)) continue;
        int te = mono_exp(m, kGaloisVar);
        Mono xm = m - mono_var(kGaloisVar, te);
        poly_add_term(G, r, xm, uint64_t(1) << te);
    }
    return r;
}

// 0/1 lift of a GF(2^k) polynomial into Z/2^N coefficients, expanding the
// coefficient bitmask along the Galois variable.
static MPoly<Z2Ring> lift01_poly(const MPoly<GF2Ring>& p, const Z2Ring& R) {
    MPoly<Z2Ring> r;
    for (auto& [m, v] : p.terms) {
        for (int i = 0; i < 32; ++i) {
            if ((v >> i) & 1) {
                Mono mm = mono_mul(m, mono_var(kGaloisVar, i));
                poly_add_term(R, r, mm, R.one());
            }
        }
    }
    return r;
}

// Monomial content common to num and den, cancelled exactly.
static void cancel_mono_content(MPoly<Z2Ring>& num, MPoly<Z2Ring>& den) {
    if (num.terms.empty() || den.terms.empty()) return;
    int lo[kMaxVars];
    for (int v = 0; v < kMaxVars; ++v) lo[v] = 0xffff;
    auto scan = [&](const MPoly<Z2Ring>& p) {
        for (auto& [m, c] : p.terms)
            for (int v = 0; v < kMaxVars; ++v) lo[v] = std::min(lo[v], mono_exp(m, v));
    };
    scan(num);
    scan(den);
    Mono g = 0;
    for (int v = 0; v < kMaxVars; ++v) g += mono_var(v, lo[v]);
    if (g == 0) return;
    auto strip = [&](MPoly<Z2Ring>& p) {
        MPoly<Z2Ring> r;
        for (auto& [m, c] : p.terms) r.terms.emplace(m - g, c);
        p = std::move(r);
    };
    strip(num);
    strip(den);
}

template <class Ring>
static void cancel_mono_content_g(const Ring&, MPoly<Ring>& num, MPoly<Ring>& den) {
    if (num.terms.empty() || den.terms.empty()) return;
    int lo[kMaxVars];
    for (int v = 0; v < kMaxVars; ++v) lo[v] = 0xffff;
    auto scan = [&](const MPoly<Ring>& p) {
        for (auto& [m, c] : p.terms)
            for (int v = 0; v < kMaxVars; ++v) lo[v] = std::min(lo[v], mono_exp(m, v));
    };
    scan(num);
    scan(den);
    Mono g = 0;
    for (int v = 0; v < kMaxVars; ++v) g += mono_var(v, lo[v]);
    if (g == 0) return;
    auto strip = [&](MPoly<Ring>& p) {
        MPoly<Ring> r;
        for (auto& [m, c] : p.terms) r.terms.emplace(m - g, c);
        p = std::move(r);
    };
    strip(num);
    strip(den);
}

// Univariate gcd over GF(2^k) for ratfun reduction in one variable.
static MPoly<GF2Ring> gf_uni_gcd(const GF2Ring& G, MPoly<GF2Ring> a, MPoly<GF2Ring> b) {
    auto degree = [](const MPoly<GF2Ring>& p) { return p.is_zero() ? -1 : p.deg_in(0); };
    while (!b.is_zero()) {
        // remainder of a by b
        int db = degree(b);
        GF2Ring::Value lb = b.terms.rbegin()->second;
        while (!a.is_zero() && degree(a) >= db) {
            int da = degree(a);
            GF2Ring::Value la = a.terms.rbegin()->second;
            MPoly<GF2Ring> t;
            t.terms.emplace(mono_var(0, da - db), G.mul(la, G.inv(lb)));
            a = poly_sub(G, a, poly_mul(G, t, b));
        }
        std::swap(a, b);
    }
    if (!a.is_zero()) {
        GF2Ring::Value la = a.terms.rbegin()->second;
        a = poly_scale(G, a, G.inv(la));
    }
    return a;
}

// Exact division num / den when it leaves no remainder; den must have a
// unique leading term in variable v.
static bool try_exact_div(const Z2Ring& R, const MPoly<Z2Ring>& num, const MPoly<Z2Ring>& den,
                          int v, MPoly<Z2Ring>& out) {
    int dd = den.deg_in(v);
    int count = 0;
    for (auto& [m, c] : den.terms)
        if (mono_exp(m, v) == dd) ++count;
    if (count != 1) return false;
    auto lead_it = std::find_if(den.terms.begin(), den.terms.end(),
                                [&](auto& t) { return mono_exp(t.first, v) == dd; });
    if (lead_it->second % 2 == 0) return false;
    try {
        auto [q, r] = poly_divmod_monic(R, num, den, v);
        if (!r.is_zero()) return false;
        out = std::move(q);
        return true;
    } catch (const InternalError&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// element constructors

FieldElement FieldElement::zero(const DescPtr& d) {
    FieldElement e;
    e.desc = d;
    e.certified_zero = true;
    switch (d->kind) {
        case FieldKind::GF2k: e.gf = 0; break;
        case FieldKind::RatFun: e.rden = poly_const(gfring(d), GF2Ring::Value(1)); break;
        case FieldKind::Laurent: e.llead = d->prec; break;
        case FieldKind::Teich:
            e.tpbits = d->prec;
            e.tden = poly_const(z2ring(d->prec), Z2Ring::Value(1));
            break;
        case FieldKind::Eis2:
            e.epair = {zero(d->sub), zero(d->sub)};
            break;
    }
    return e;
}

FieldElement FieldElement::one(const DescPtr& d) { return from_int(d, 1); }

FieldElement FieldElement::from_int(const DescPtr& d, long long n) {
    switch (d->kind) {
        case FieldKind::GF2k: {
            FieldElement e;
            e.desc = d;
            e.gf = static_cast<uint32_t>(((n % 2) + 2) % 2);
            e.certified_zero = (e.gf == 0);
            return e;
        }
        case FieldKind::RatFun: {
            long long m = ((n % 2) + 2) % 2;
            if (m == 0) return zero(d);
            FieldElement e;
            e.desc = d;
            auto G = gfring(d);
            e.rnum = poly_const(G, GF2Ring::Value(1));
            e.rden = poly_const(G, GF2Ring::Value(1));
            return e;
        }
        case FieldKind::Laurent: {
            long long m = ((n % 2) + 2) % 2;
            if (m == 0) return zero(d);
            FieldElement e;
            e.desc = d;
            e.llead = 0;
            e.ldig.assign(static_cast<size_t>(d->prec), FieldElement::zero(d->sub));
            e.ldig[0] = FieldElement::one(d->sub);
            return e;
        }
        case FieldKind::Teich: {
            if (n == 0) return zero(d);
            auto R = z2ring(d->prec);
            long long a = n;
            long scale = 0;
            while (a % 2 == 0) { a /= 2; ++scale; }
            FieldElement e;
            e.desc = d;
            e.tscale = scale;
            e.tpbits = d->prec;
            e.tnum = poly_const(R, static_cast<uint64_t>(a) & R.mask());
            e.tden = poly_const(R, R.one());
            return e;
        }
        case FieldKind::Eis2: {
            FieldElement e;
            e.desc = d;
            e.epair = {from_int(d->sub, n), zero(d->sub)};
            e.certified_zero = (n == 0);
            return e;
        }
    }
    throw InternalError("from_int: bad kind");
}

FieldElement FieldElement::variable(const DescPtr& d, int i) {
    if (d->kind != FieldKind::RatFun) throw Unsupported("variable() needs a ratfun kind");
    if (i < 0 || i >= d->num_vars()) throw PreconditionViolated("variable index out of range");
    FieldElement e;
    e.desc = d;
    auto G = gfring(d);
    e.rnum = poly_var(G, i);
    e.rden = poly_const(G, GF2Ring::Value(1));
    return e;
}

FieldElement FieldElement::uniformizer(const DescPtr& d) {
    switch (d->kind) {
        case FieldKind::Laurent: {
            FieldElement e;
            e.desc = d;
            e.llead = 1;
            e.ldig.assign(static_cast<size_t>(d->prec), FieldElement::zero(d->sub));
            e.ldig[0] = FieldElement::one(d->sub);
            return e;
        }
        case FieldKind::Teich: return from_int(d, 2);
        case FieldKind::Eis2: {
            FieldElement e;
            e.desc = d;
            e.epair = {zero(d->sub), one(d->sub)};
            return e;
        }
        default: throw Unsupported("uniformizer of an exact kind");
    }
}

FieldElement FieldElement::lift(const DescPtr& d, const FieldElement& r) {
    if (!same_descriptor(d->residue_desc(), r.desc))
        throw PreconditionViolated("lift: element not in the residue field");
    switch (d->kind) {
        case FieldKind::Laurent: {
            FieldElement e;
            e.desc = d;
            e.llead = 0;
            e.ldig.assign(static_cast<size_t>(d->prec), FieldElement::zero(d->sub));
            e.ldig[0] = r;
            e.certified_zero = r.is_zero_certified();
            e.normalize();
            return e;
        }
        case FieldKind::Teich: {
            auto R = z2ring(d->prec);
            FieldElement e;
            e.desc = d;
            e.tpbits = d->prec;
            if (r.desc->kind == FieldKind::GF2k) {
                MPoly<GF2Ring> c;
                poly_add_term(gfring(r.desc), c, Mono(0), r.gf);
                e.tnum = lift01_poly(c, R);
                e.tden = poly_const(R, R.one());
            } else {
                e.tnum = lift01_poly(r.rnum, R);
                e.tden = lift01_poly(r.rden, R);
            }
            e.certified_zero = r.is_zero_certified();
            e.normalize();
            return e;
        }
        case FieldKind::Eis2: {
            FieldElement e;
            e.desc = d;
            e.epair = {lift(d->sub, r), zero(d->sub)};
            e.certified_zero = r.is_zero_certified();
            return e;
        }
        default: throw Unsupported("lift into an exact kind");
    }
}

FieldElement FieldElement::embed_base(const DescPtr& d, const FieldElement& b) {
    if (d->kind != FieldKind::Eis2) throw Unsupported("embed_base is for eis2");
    if (!same_descriptor(d->sub, b.desc)) throw PreconditionViolated("embed_base: wrong base element");
    FieldElement e;
    e.desc = d;
    e.epair = {b, zero(d->sub)};
    e.certified_zero = b.is_zero_certified();
    return e;
}

// ---------------------------------------------------------------------------
// normalization

void FieldElement::normalize() {
    switch (desc->kind) {
        case FieldKind::GF2k:
            certified_zero = (gf == 0);
            return;
        case FieldKind::RatFun: {
            auto G = gfring(desc);
            if (rden.is_zero()) throw NotInvertible("ratfun with zero denominator");
            if (rnum.is_zero()) {
                certified_zero = true;
                rden = poly_const(G, GF2Ring::Value(1));
                return;
            }
            certified_zero = false;
            cancel_mono_content_g(G, rnum, rden);
            if (desc->num_vars() == 1 && (rnum.total_deg() > 8 || rden.total_deg() > 8)) {
                auto g = gf_uni_gcd(G, rnum, rden);
                if (!g.is_zero() && g.deg_in(0) > 0) {
                    // exact division by the gcd
                    auto divide = [&](const MPoly<GF2Ring>& p) {
                        MPoly<GF2Ring> rem = p, q;
                        int dg = g.deg_in(0);
                        GF2Ring::Value lg = g.terms.rbegin()->second;
                        while (!rem.is_zero() && rem.deg_in(0) >= dg) {
                            int dr = rem.deg_in(0);
                            GF2Ring::Value lr = rem.terms.rbegin()->second;
                            MPoly<GF2Ring> t;
                            t.terms.emplace(mono_var(0, dr - dg), G.mul(lr, G.inv(lg)));
                            q = poly_add(G, q, t);
                            rem = poly_sub(G, rem, poly_mul(G, t, g));
                        }
                        if (!rem.is_zero()) throw InternalError("gcd division not exact");
                        return q;
                    };
                    rnum = divide(rnum);
                    rden = divide(rden);
                }
            }
            // canonical denominator: leading coefficient one
            GF2Ring::Value ld = rden.terms.rbegin()->second;
            if (ld != 1) {
                rnum = poly_scale(G, rnum, G.inv(ld));
                rden = poly_scale(G, rden, G.inv(ld));
            }
            if (rnum.total_deg() > desc->degree_budget || rden.total_deg() > desc->degree_budget)
                throw DegreeBudgetExceeded("ratfun degree above budget " + std::to_string(desc->degree_budget));
            return;
        }
        case FieldKind::Laurent: {
            long P = llead + static_cast<long>(ldig.size());
            while (!ldig.empty() && ldig.front().is_zero_certified()) {
                ldig.erase(ldig.begin());
                ++llead;
            }
            if (ldig.empty()) llead = P;
            return;
        }
        case FieldKind::Teich: {
            auto R = z2ring(tpbits > 0 ? tpbits : desc->prec);
            if (tpbits < 4 && !certified_zero)
                throw PrecisionExhausted("teich element below minimum working precision");
            teich_reduce_galois(tnum, desc->k, R);
            teich_reduce_galois(tden, desc->k, R);
            // drop coefficients that vanish at current precision
            auto mask_poly = [&](MPoly<Z2Ring>& p) {
                for (auto it = p.terms.begin(); it != p.terms.end();) {
                    if ((it->second & R.mask()) == 0) it = p.terms.erase(it);
                    else { it->second &= R.mask(); ++it; }
                }
            };
            mask_poly(tnum);
            mask_poly(tden);
            if (tden.is_zero() || content2(tden, R) != 0)
                throw NotInvertible("teich denominator is not a unit");
            if (tnum.is_zero()) {
                tden = poly_const(R, R.one());
                return;
            }
            certified_zero = false;
            // fold the 2-content of the numerator into the scale so that the
            // scale tracks the valuation; the absolute precision is unchanged
            {
                int c = content2(tnum, R);
                if (c > 0) {
                    tnum = shift2_down(tnum, c, R);
                    tscale += c;
                    tpbits -= c;
                    if (tpbits < 4)
                        throw PrecisionExhausted("teich mantissa exhausted by cancellation");
                    auto R2 = z2ring(tpbits);
                    for (auto& [m, cf] : tden.terms) cf &= R2.mask();
                }
            }
            cancel_mono_content(tnum, tden);
            if (desc->sub->num_vars() == 1 && desc->k == 1 &&
                (tnum.total_deg() > 12 || tden.total_deg() > 12)) {
                GF2Ring G1{1};
                auto n2 = mod2_poly(tnum, G1);
                auto d2 = mod2_poly(tden, G1);
                if (!n2.is_zero()) {
                    auto g = gf_uni_gcd(G1, n2, d2);
                    if (!g.is_zero() && g.deg_in(0) > 0) {
                        auto glift = lift01_poly(g, R);
                        MPoly<Z2Ring> qn, qd;
                        if (try_exact_div(R, tnum, glift, 0, qn) && try_exact_div(R, tden, glift, 0, qd)) {
                            tnum = std::move(qn);
                            tden = std::move(qd);
                        }
                    }
                }
            }
            if (tnum.total_deg() > desc->degree_budget || tden.total_deg() > desc->degree_budget)
                throw DegreeBudgetExceeded("teich degree above budget " + std::to_string(desc->degree_budget));
            return;
        }
        case FieldKind::Eis2:
            certified_zero = epair[0].is_zero_certified() && epair[1].is_zero_certified();
            return;
    }
}

// ---------------------------------------------------------------------------
// arithmetic

static void require_same(const FieldElement& a, const FieldElement& b) {
    if (!same_descriptor(a.desc, b.desc))
        throw PreconditionViolated("field mismatch: " + a.desc->name() + " vs " + b.desc->name());
}

FieldElement FieldElement::add(const FieldElement& o) const {
    require_same(*this, o);
    if (certified_zero) return o;
    if (o.certified_zero) return *this;
    FieldElement r;
    r.desc = desc;
    switch (desc->kind) {
        case FieldKind::GF2k:
            r.gf = gf ^ o.gf;
            r.certified_zero = (r.gf == 0);
            return r;
        case FieldKind::RatFun: {
            auto G = gfring(desc);
            r.rnum = poly_add(G, poly_mul(G, rnum, o.rden), poly_mul(G, o.rnum, rden));
            r.rden = poly_mul(G, rden, o.rden);
            r.normalize();
            return r;
        }
        case FieldKind::Laurent: {
            long P1 = llead + static_cast<long>(ldig.size());
            long P2 = o.llead + static_cast<long>(o.ldig.size());
            long P = std::min(P1, P2);
            long lead = std::min(llead, o.llead);
            if (P <= lead) {
                r.llead = P;
                return r; // nothing certified
            }
            r.llead = lead;
            r.ldig.assign(static_cast<size_t>(P - lead), FieldElement::zero(desc->sub));
            for (size_t i = 0; i < ldig.size(); ++i) {
                long e = llead + static_cast<long>(i);
                if (e < P) r.ldig[static_cast<size_t>(e - lead)] = ldig[i];
            }
            for (size_t i = 0; i < o.ldig.size(); ++i) {
                long e = o.llead + static_cast<long>(i);
                if (e < P)
                    r.ldig[static_cast<size_t>(e - lead)] =
                        r.ldig[static_cast<size_t>(e - lead)].add(o.ldig[i]);
            }
            r.normalize();
            return r;
        }
        case FieldKind::Teich: {
            long s = std::min(tscale, o.tscale);
            long long P = std::min(tscale + tpbits, o.tscale + o.tpbits);
            int pb = static_cast<int>(std::min<long long>(P - s, desc->prec));
            auto R = z2ring(pb);
            auto sh = [&](const MPoly<Z2Ring>& p, long delta) {
                MPoly<Z2Ring> q;
                for (auto& [m, c] : p.terms) {
                    uint64_t w = (delta >= 63) ? 0 : ((c << delta) & R.mask());
                    if (w) q.terms.emplace(m, w);
                }
                return q;
            };
            auto n1 = sh(poly_mul(R, tnum, o.tden), tscale - s);
            auto n2 = sh(poly_mul(R, o.tnum, tden), o.tscale - s);
            r.tnum = poly_add(R, n1, n2);
            r.tden = poly_mul(R, tden, o.tden);
            r.tscale = s;
            r.tpbits = pb;
            r.normalize();
            return r;
        }
        case FieldKind::Eis2:
            r.epair = {epair[0].add(o.epair[0]), epair[1].add(o.epair[1])};
            r.normalize();
            return r;
    }
    throw InternalError("add: bad kind");
}

FieldElement FieldElement::neg() const {
    if (certified_zero) return *this;
    FieldElement r;
    r.desc = desc;
    switch (desc->kind) {
        case FieldKind::GF2k:
        case FieldKind::RatFun:
            return *this; // characteristic 2
        case FieldKind::Laurent:
            return *this;
        case FieldKind::Teich: {
            auto R = z2ring(tpbits);
            r = *this;
            MPoly<Z2Ring> n;
            for (auto& [m, c] : tnum.terms) n.terms.emplace(m, R.neg(c));
            r.tnum = std::move(n);
            return r;
        }
        case FieldKind::Eis2:
            r.epair = {epair[0].neg(), epair[1].neg()};
            r.certified_zero = certified_zero;
            return r;
    }
    throw InternalError("neg: bad kind");
}

FieldElement FieldElement::sub(const FieldElement& o) const { return add(o.neg()); }

FieldElement FieldElement::mul(const FieldElement& o) const {
    require_same(*this, o);
    if (certified_zero || o.certified_zero) return zero(desc);
    FieldElement r;
    r.desc = desc;
    switch (desc->kind) {
        case FieldKind::GF2k:
            r.gf = gf2k::mul(gf, o.gf, desc->k);
            r.certified_zero = (r.gf == 0);
            return r;
        case FieldKind::RatFun: {
            auto G = gfring(desc);
            r.rnum = poly_mul(G, rnum, o.rnum);
            r.rden = poly_mul(G, rden, o.rden);
            r.normalize();
            return r;
        }
        case FieldKind::Laurent: {
            long P1 = llead + static_cast<long>(ldig.size());
            long P2 = o.llead + static_cast<long>(o.ldig.size());
            long P = std::min(P1 + o.llead, P2 + llead);
            long lead = llead + o.llead;
            r.llead = lead;
            if (P > lead) {
                r.ldig.assign(static_cast<size_t>(P - lead), FieldElement::zero(desc->sub));
                for (size_t i = 0; i < ldig.size(); ++i) {
                    if (ldig[i].is_zero_certified()) continue;
                    for (size_t j = 0; j < o.ldig.size(); ++j) {
                        size_t k = i + j;
                        if (k >= r.ldig.size()) break;
                        r.ldig[k] = r.ldig[k].add(ldig[i].mul(o.ldig[j]));
                    }
                }
            }
            r.normalize();
            return r;
        }
        case FieldKind::Teich: {
            int pb = std::min(tpbits, o.tpbits);
            auto R = z2ring(pb);
            r.tscale = tscale + o.tscale;
            r.tpbits = pb;
            r.tnum = poly_mul(R, tnum, o.tnum, desc->degree_budget * 2);
            r.tden = poly_mul(R, tden, o.tden, desc->degree_budget * 2);
            r.normalize();
            return r;
        }
        case FieldKind::Eis2: {
            const FieldElement &a1 = epair[0], &b1 = epair[1], &a2 = o.epair[0], &b2 = o.epair[1];
            FieldElement twou = FieldElement::from_int(desc->sub, 2).mul(*desc->eis_u);
            r.epair = {a1.mul(a2).add(twou.mul(b1.mul(b2))), a1.mul(b2).add(b1.mul(a2))};
            r.normalize();
            return r;
        }
    }
    throw InternalError("mul: bad kind");
}

FieldElement FieldElement::inv() const {
    if (certified_zero) throw NotInvertible("certified zero");
    FieldElement r;
    r.desc = desc;
    switch (desc->kind) {
        case FieldKind::GF2k:
            r.gf = gf2k::inv(gf, desc->k);
            return r;
        case FieldKind::RatFun: {
            if (rnum.is_zero()) throw NotInvertible("zero rational function");
            r.rnum = rden;
            r.rden = rnum;
            r.normalize();
            return r;
        }
        case FieldKind::Laurent: {
            FieldElement t = *this;
            t.normalize();
            if (t.ldig.empty())
                throw PrecisionExhausted("laurent inverse of an indistinguishable-from-zero element");
            size_t n = t.ldig.size();
            // series inversion of the unit part
            std::vector<FieldElement> b(n, FieldElement::zero(desc->sub));
            FieldElement c0inv = t.ldig[0].inv();
            b[0] = c0inv;
            for (size_t m = 1; m < n; ++m) {
                FieldElement acc = FieldElement::zero(desc->sub);
                for (size_t i = 1; i <= m; ++i) acc = acc.add(t.ldig[i].mul(b[m - i]));
                b[m] = c0inv.mul(acc).neg();
            }
            r.llead = -t.llead;
            r.ldig = std::move(b);
            r.normalize();
            return r;
        }
        case FieldKind::Teich: {
            int c = content2(tnum, z2ring(tpbits));
            if (c >= tpbits) throw PrecisionExhausted("teich inverse of an indistinguishable-from-zero element");
            FieldElement x = *this;
            if (c > 0) { // renormalize: pull the 2-content into the scale
                auto R0 = z2ring(tpbits);
                x.tnum = shift2_down(x.tnum, c, R0);
                x.tscale += c;
                x.tpbits -= c;
                if (x.tpbits < 4) throw PrecisionExhausted("teich inverse below working precision");
            }
            r.tscale = -x.tscale;
            r.tpbits = x.tpbits;
            r.tnum = x.tden;
            r.tden = x.tnum;
            r.normalize();
            return r;
        }
        case FieldKind::Eis2: {
            // (a + b pi)^-1 = (a - b pi) / (a^2 - 2 u b^2)
            const FieldElement &a = epair[0], &b = epair[1];
            FieldElement twou = FieldElement::from_int(desc->sub, 2).mul(*desc->eis_u);
            FieldElement nrm = a.mul(a).sub(twou.mul(b.mul(b)));
            FieldElement ni = nrm.inv();
            r.epair = {a.mul(ni), b.mul(ni).neg()};
            r.normalize();
            return r;
        }
    }
    throw InternalError("inv: bad kind");
}

FieldElement FieldElement::div(const FieldElement& o) const { return mul(o.inv()); }

FieldElement FieldElement::pow_int(long long e) const {
    if (e < 0) return inv().pow_int(-e);
    FieldElement r = one(desc);
    FieldElement b = *this;
    while (e) {
        if (e & 1) r = r.mul(b);
        b = b.mul(b);
        e >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// valuation, residue, predicates

Zinf FieldElement::val() const {
    if (certified_zero) return Zinf::infinity();
    switch (desc->kind) {
        case FieldKind::GF2k:
        case FieldKind::RatFun:
            throw Unsupported("val() on an exact kind");
        case FieldKind::Laurent: {
            FieldElement t = *this;
            t.normalize();
            if (t.ldig.empty())
                throw PrecisionExhausted("laurent element vanishes to precision O(T^" +
                                         std::to_string(t.llead) + ")");
            return Zinf::of(t.llead);
        }
        case FieldKind::Teich: {
            int c = content2(tnum, z2ring(tpbits));
            if (tnum.is_zero() || c >= tpbits)
                throw PrecisionExhausted("teich element vanishes to precision O(2^" +
                                         std::to_string(tscale + tpbits) + ")");
            return Zinf::of(tscale + c);
        }
        case FieldKind::Eis2: {
            // lambda(a + b pi) = min(2 lambda_base(a), 2 lambda_base(b) + 1);
            // the parities differ so the minimum is never a tie.  When one
            // part is only known to vanish up to its precision, the other
            // part still decides the minimum if it sits strictly below that
            // bound.
            constexpr long long kBig = 1LL << 40;
            std::optional<long long> va, vb;
            long long boundA = kBig, boundB = kBig; // valid lower bounds when unknown
            if (!epair[0].is_zero_certified()) {
                try { va = epair[0].val().as_integer(); }
                catch (const PrecisionExhausted&) { boundA = epair[0].known_precision().as_integer(); }
            }
            if (!epair[1].is_zero_certified()) {
                try { vb = epair[1].val().as_integer(); }
                catch (const PrecisionExhausted&) { boundB = epair[1].known_precision().as_integer(); }
            }
            long long candA = va ? 2 * *va : 2 * boundA;
            long long candB = vb ? 2 * *vb + 1 : 2 * boundB + 1;
            if (va && vb) return Zinf::of(std::min(candA, candB));
            if (va && candA < candB) return Zinf::of(candA);
            if (vb && candB < candA) return Zinf::of(candB);
            throw PrecisionExhausted("eis2 valuation hidden by truncation");
        }
    }
    throw InternalError("val: bad kind");
}

Zinf FieldElement::known_precision() const {
    if (certified_zero) return Zinf::infinity();
    switch (desc->kind) {
        case FieldKind::GF2k:
        case FieldKind::RatFun: return Zinf::infinity();
        case FieldKind::Laurent: return Zinf::of(llead + static_cast<long>(ldig.size()));
        case FieldKind::Teich: return Zinf::of(tscale + tpbits);
        case FieldKind::Eis2: {
            Zinf pa = epair[0].known_precision();
            Zinf pb = epair[1].known_precision();
            Zinf ca = pa.is_infinity() ? pa : Zinf::of(2 * pa.as_integer());
            Zinf cb = pb.is_infinity() ? pb : Zinf::of(2 * pb.as_integer() + 1);
            return Zinf::min(ca, cb);
        }
    }
    throw InternalError("known_precision: bad kind");
}

FieldElement FieldElement::residue() const {
    DescPtr rd = desc->residue_desc();
    if (certified_zero) return FieldElement::zero(rd);
    switch (desc->kind) {
        case FieldKind::Laurent: {
            FieldElement t = *this;
            t.normalize();
            if (t.llead < 0 && !t.ldig.empty()) throw NegativeValue("laurent residue of a pole");
            if (t.llead > 0) return FieldElement::zero(rd);
            if (t.ldig.empty()) throw PrecisionExhausted("laurent residue hidden by truncation");
            return t.ldig[0];
        }
        case FieldKind::Teich: {
            auto R = z2ring(tpbits);
            int c = tnum.is_zero() ? tpbits : content2(tnum, R);
            if (c >= tpbits) {
                // vanishes to the stored precision: in the valuation ideal
                // provided at least one positive digit is certified
                if (tscale + tpbits >= 1) return FieldElement::zero(rd);
                throw PrecisionExhausted("teich residue hidden by truncation");
            }
            long v = tscale + c;
            if (v < 0) throw NegativeValue("teich residue of a non-integral element");
            if (v > 0) return FieldElement::zero(rd);
            if (tscale < 0) {
                // valuation zero but negative scale: fold the 2-content of the
                // numerator into the scale first (costs c mantissa bits)
                FieldElement t = *this;
                t.tnum = shift2_down(t.tnum, c, R);
                t.tpbits -= c;
                t.tscale += c;
                return t.residue();
            }
            GF2Ring G{desc->k};
            auto n2 = mod2_poly(tnum, G);
            auto d2 = mod2_poly(tden, G);
            if (rd->kind == FieldKind::GF2k) {
                if (!n2.is_constant() || !d2.is_constant())
                    throw InternalError("teich residue: non-constant over gf base");
                FieldElement e;
                e.desc = rd;
                e.gf = static_cast<uint32_t>(G.mul(n2.constant_term(), G.inv(d2.constant_term())));
                e.certified_zero = (e.gf == 0);
                return e;
            }
            FieldElement e;
            e.desc = rd;
            e.rnum = std::move(n2);
            e.rden = std::move(d2);
            e.normalize();
            return e;
        }
        case FieldKind::Eis2: {
            Zinf v = val();
            if (v < Zinf::of(0)) throw NegativeValue("eis2 residue of a non-integral element");
            if (v > Zinf::of(0)) return FieldElement::zero(rd);
            return epair[0].residue();
        }
        default: throw Unsupported("residue of an exact kind");
    }
}

bool FieldElement::is_zero_certified() const { return certified_zero; }

bool FieldElement::is_zero_at_precision() const {
    if (certified_zero) return true;
    switch (desc->kind) {
        case FieldKind::GF2k: return gf == 0;
        case FieldKind::RatFun: return rnum.is_zero();
        case FieldKind::Laurent: {
            for (auto& d : ldig)
                if (!d.is_zero_at_precision()) return false;
            return true;
        }
        case FieldKind::Teich: {
            auto R = z2ring(tpbits);
            return tnum.is_zero() || content2(tnum, R) >= tpbits;
        }
        case FieldKind::Eis2:
            return epair[0].is_zero_at_precision() && epair[1].is_zero_at_precision();
    }
    return false;
}

bool FieldElement::equals(const FieldElement& o) const { return sub(o).is_zero_at_precision(); }

bool FieldElement::is_one() const { return equals(one(desc)); }

// ---------------------------------------------------------------------------
// e_F, Hensel, square roots

Zinf e_F(const DescPtr& d) {
    if (d->is_char2()) return Zinf::infinity();
    FieldElement two = FieldElement::from_int(d, 2);
    return two.val();
}

FieldElement hensel_quadratic(const FieldElement& a0, const FieldElement& a1, const FieldElement& a2) {
    const DescPtr& d = a0.desc;
    if (!d->is_valued()) throw Unsupported("hensel_quadratic needs a valued kind");
    if (!(a0.is_zero_certified() || a0.val() >= Zinf::of(1)))
        throw PreconditionViolated("hensel_quadratic: a0 must lie in the valuation ideal");
    if (a1.val() != Zinf::of(0))
        throw PreconditionViolated("hensel_quadratic: a1 must be a unit");
    if (!(a2.is_zero_certified() || a2.val() >= Zinf::of(0)))
        throw PreconditionViolated("hensel_quadratic: a2 must be integral");
    // division-free fixed point t <- -(a2 + a0 t^2)/a1: the residual gains at
    // least lambda(a0) >= 1 per step, and the only inversion is the unit a1
    FieldElement a1inv = a1.inv();
    FieldElement t = a2.mul(a1inv).neg();
    int cap = 4 * d->prec + 16;
    for (int iter = 0; iter < cap; ++iter) {
        FieldElement ft = a0.mul(t).mul(t).add(a1.mul(t)).add(a2);
        if (ft.is_zero_at_precision()) return t;
        t = a2.add(a0.mul(t).mul(t)).mul(a1inv).neg();
    }
    FieldElement ft = a0.mul(t).mul(t).add(a1.mul(t)).add(a2);
    if (!ft.is_zero_at_precision())
        throw PrecisionExhausted("hensel_quadratic did not converge");
    return t;
}

std::optional<FieldElement> sqrt_char2(const FieldElement& x) {
    if (!x.desc->is_exact()) throw Unsupported("sqrt_char2 needs an exact kind");
    if (x.is_zero_certified()) return FieldElement::zero(x.desc);
    if (x.desc->kind == FieldKind::GF2k) {
        FieldElement r;
        r.desc = x.desc;
        r.gf = gf2k::sqrt(x.gf, x.desc->k);
        return r;
    }
    GF2Ring G{x.desc->gf_degree()};
    // sqrt(n/d) = sqrt(n*d)/d; a char-2 polynomial is a square iff every
    // monomial has even exponents (coefficients are in a perfect field).
    auto p = poly_mul(G, x.rnum, x.rden);
    MPoly<GF2Ring> s;
    for (auto& [m, c] : p.terms) {
        Mono h = 0;
        for (int v = 0; v < kMaxVars; ++v) {
            int e = mono_exp(m, v);
            if (e % 2) return std::nullopt;
            h += mono_var(v, e / 2);
        }
        s.terms.emplace(h, G.sqrt(c));
    }
    FieldElement r;
    r.desc = x.desc;
    r.rnum = std::move(s);
    r.rden = x.rden;
    r.normalize();
    return r;
}

int gf_abs_trace(const FieldElement& x) {
    if (x.desc->kind != FieldKind::GF2k) throw Unsupported("gf_abs_trace needs gf(2^k)");
    return static_cast<int>(gf2k::trace(x.gf, x.desc->k));
}

// ---------------------------------------------------------------------------
// printing

static std::string mono_str(Mono m, const std::vector<std::string>& vars, int k) {
    std::ostringstream os;
    bool first = true;
    for (int v = 0; v < kMaxVars; ++v) {
        int e = mono_exp(m, v);
        if (!e) continue;
        std::string nm = (v == kGaloisVar) ? "g" : (v < static_cast<int>(vars.size()) ? vars[v] : "v" + std::to_string(v));
        if (!first) os << "*";
        os << nm;
        if (e > 1) os << "^" << e;
        first = false;
    }
    (void)k;
    return os.str();
}

static std::string gfpoly_str(const MPoly<GF2Ring>& p, const std::vector<std::string>& vars, int k) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
        if (!first) os << " + ";
        std::string ms = mono_str(it->first, vars, k);
        if (it->second != 1 || ms.empty()) {
            if (k == 1) os << it->second;
            else {
                // print the GF(2^k) coefficient as a polynomial in g
                os << "(";
                bool f2 = true;
                for (int i = 15; i >= 0; --i) {
                    if ((it->second >> i) & 1) {
                        if (!f2) os << "+";
                        if (i == 0) os << "1";
                        else if (i == 1) os << "g";
                        else os << "g^" << i;
                        f2 = false;
                    }
                }
                os << ")";
            }
            if (!ms.empty()) os << "*";
        }
        os << ms;
        first = false;
    }
    return os.str();
}

static std::string z2poly_str(const MPoly<Z2Ring>& p, const std::vector<std::string>& vars) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
        if (!first) os << " + ";
        std::string ms = mono_str(it->first, vars, 1);
        if (it->second != 1 || ms.empty()) {
            os << it->second;
            if (!ms.empty()) os << "*";
        }
        os << ms;
        first = false;
    }
    return os.str();
}

std::string FieldElement::str() const {
    switch (desc->kind) {
        case FieldKind::GF2k: {
            if (desc->k == 1) return gf ? "1" : "0";
            MPoly<GF2Ring> p;
            if (gf) p.terms.emplace(Mono(0), gf);
            return gfpoly_str(p, {}, desc->k);
        }
        case FieldKind::RatFun: {
            std::string n = gfpoly_str(rnum, desc->vars, desc->k);
            std::string d = gfpoly_str(rden, desc->vars, desc->k);
            if (d == "1") return n;
            return "(" + n + ")/(" + d + ")";
        }
        case FieldKind::Laurent: {
            if (certified_zero) return "0";
            std::ostringstream os;
            bool first = true;
            for (size_t i = 0; i < ldig.size(); ++i) {
                if (ldig[i].is_zero_at_precision()) continue;
                long e = llead + static_cast<long>(i);
                if (!first) os << " + ";
                os << "(" << ldig[i].str() << ")";
                if (e != 0) os << "*T^" << e;
                first = false;
            }
            if (first) os << "0";
            os << " + O(T^" << llead + static_cast<long>(ldig.size()) << ")";
            return os.str();
        }
        case FieldKind::Teich: {
            if (certified_zero) return "0";
            std::ostringstream os;
            auto vars = desc->sub->kind == FieldKind::RatFun ? desc->sub->vars : std::vector<std::string>{};
            if (tscale != 0) os << "2^" << tscale << "*";
            os << "(" << z2poly_str(tnum, vars) << ")";
            std::string d = z2poly_str(tden, vars);
            if (d != "1") os << "/(" << d << ")";
            os << " + O(2^" << tscale + tpbits << ")";
            return os.str();
        }
        case FieldKind::Eis2: {
            if (certified_zero) return "0";
            return "(" + epair[0].str() + ") + (" + epair[1].str() + ")*pi";
        }
    }
    return "?";
}

} // namespace conival
