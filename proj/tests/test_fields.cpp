#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conival/field.hpp"

using namespace conival;

namespace {

// deterministic sampler for field elements of the common kinds
struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(uint64_t seed) : rng(seed) {}

    FieldElement ratfun(const DescPtr& d, int deg = 2) {
        auto G = GF2Ring{d->gf_degree()};
        FieldElement e;
        e.desc = d;
        auto rnd_poly = [&](bool nonzero) {
            MPoly<GF2Ring> p;
            for (int t = 0; t < 4; ++t) {
                Mono m = 0;
                for (int v = 0; v < d->num_vars(); ++v)
                    m += mono_var(v, static_cast<int>(rng() % (deg + 1)));
                poly_add_term(G, p, m, rng() % (1ull << d->gf_degree()));
            }
            if (nonzero && p.is_zero()) poly_add_term(G, p, 0, 1);
            return p;
        };
        e.rnum = rnd_poly(false);
        e.rden = rnd_poly(true);
        e.normalize();
        return e;
    }

    FieldElement teich(const DescPtr& d) {
        // random small integer combination of lifted residue monomials
        FieldElement acc = FieldElement::zero(d);
        auto rd = d->residue_desc();
        for (int t = 0; t < 3; ++t) {
            long long c = static_cast<long long>(rng() % 17) - 8;
            FieldElement term = FieldElement::from_int(d, c);
            if (rd->kind == FieldKind::RatFun) {
                int v = static_cast<int>(rng() % rd->vars.size());
                int e = static_cast<int>(rng() % 3);
                FieldElement mono = FieldElement::lift(d, FieldElement::variable(rd, v).pow_int(e));
                term = term.mul(mono);
            }
            acc = acc.add(term);
        }
        return acc;
    }

    FieldElement laurent(const DescPtr& d) {
        FieldElement acc = FieldElement::zero(d);
        auto rd = d->residue_desc();
        for (int t = 0; t < 3; ++t) {
            int e = static_cast<int>(rng() % 5) - 1;
            FieldElement digit = (rng() % 2) ? FieldElement::one(rd) : FieldElement::zero(rd);
            if (rd->kind == FieldKind::RatFun && rng() % 2)
                digit = digit.add(FieldElement::variable(rd, 0));
            acc = acc.add(FieldElement::lift(d, digit).mul(FieldElement::uniformizer(d).pow_int(e)));
        }
        return acc;
    }
};

bool nonzero_at_prec(const FieldElement& x) { return !x.is_zero_at_precision(); }

} // namespace

TEST_CASE("gf(2^k) basic arithmetic") {
    auto d = make_gf(4);
    auto a = FieldElement::from_int(d, 1);
    CHECK(a.is_one());
    FieldElement g;
    g.desc = d;
    g.gf = 2; // the generator
    auto gi = g.inv();
    CHECK(g.mul(gi).is_one());
    // Frobenius square root inverts squaring
    auto g2 = g.mul(g);
    auto r = sqrt_char2(g2);
    REQUIRE(r.has_value());
    CHECK(r->equals(g));
}

TEST_CASE("ratfun arithmetic and field axioms on samples") {
    auto d = make_ratfun(make_gf(1), {"x", "y"});
    Sampler s(12345);
    for (int i = 0; i < 40; ++i) {
        auto a = s.ratfun(d), b = s.ratfun(d), c = s.ratfun(d);
        CHECK(a.add(b).equals(b.add(a)));
        CHECK(a.mul(b.add(c)).equals(a.mul(b).add(a.mul(c))));
        CHECK(a.mul(b.mul(c)).equals(a.mul(b).mul(c)));
        if (nonzero_at_prec(a)) CHECK(a.mul(a.inv()).is_one());
    }
    // cross-multiplied equality of unreduced fractions
    auto x = FieldElement::variable(d, 0);
    auto one = FieldElement::one(d);
    auto f = x.mul(x).add(x);              // x^2+x
    auto g = x.add(one);                   // x+1
    CHECK(f.div(x).equals(g));             // (x^2+x)/x == x+1
}

TEST_CASE("laurent valuation and arithmetic") {
    auto d = make_laurent(make_gf(1), 16);
    auto T = FieldElement::uniformizer(d);
    // val(t^3 + t^5) = 3
    auto v = T.pow_int(3).add(T.pow_int(5));
    CHECK(v.val() == Zinf::of(3));
    // e_F = infinity in characteristic 2
    CHECK(e_F(d).is_infinity());
    // inverse of a unit series
    auto u = FieldElement::one(d).add(T);
    auto ui = u.inv();
    CHECK(u.mul(ui).sub(FieldElement::one(d)).is_zero_at_precision());
    // valuation axioms on samples
    Sampler s(777);
    for (int i = 0; i < 30; ++i) {
        auto a = s.laurent(d), b = s.laurent(d);
        bool za = a.is_zero_at_precision(), zb = b.is_zero_at_precision();
        if (za || zb) continue;
        CHECK(a.mul(b).val() == a.val() + b.val());
        auto sum = a.add(b);
        if (!sum.is_zero_at_precision()) CHECK(sum.val() >= Zinf::min(a.val(), b.val()));
    }
}

TEST_CASE("teich model agrees with 2-adic integer arithmetic over gf(2)") {
    // oracle: plain integers mod 2^N
    auto d = make_teich(make_gf(1), 20);
    std::mt19937_64 rng(99);
    auto agree_mod_2N = [](const FieldElement& u, const FieldElement& v) {
        auto diff = u.sub(v);
        if (diff.is_zero_at_precision()) return true;
        return diff.val() >= Zinf::of(20);
    };
    for (int i = 0; i < 60; ++i) {
        long long a = static_cast<long long>(rng() % 4001) - 2000;
        long long b = static_cast<long long>(rng() % 4001) - 2000;
        auto A = FieldElement::from_int(d, a), B = FieldElement::from_int(d, b);
        auto S = A.add(B), P = A.mul(B);
        auto expS = FieldElement::from_int(d, ((a + b) % (1ll << 20) + (1ll << 20)) % (1ll << 20));
        auto expP = FieldElement::from_int(d, ((a * b) % (1ll << 20) + (1ll << 20)) % (1ll << 20));
        CHECK(agree_mod_2N(S, expS));
        CHECK(agree_mod_2N(P, expP));
    }
    // val(2) = 1 in the unramified kind
    CHECK(e_F(d) == Zinf::of(1));
    CHECK(FieldElement::from_int(d, 2).val() == Zinf::of(1));
    // division: 1/3 * 3 == 1
    auto three = FieldElement::from_int(d, 3);
    CHECK(three.inv().mul(three).sub(FieldElement::one(d)).is_zero_at_precision());
}

TEST_CASE("teich residue and lift over a rational function residue field") {
    auto rf = make_ratfun(make_gf(1), {"x"});
    auto d = make_teich(rf, 16);
    auto x = FieldElement::variable(rf, 0);
    // residue(lift(x)) == x
    auto lx = FieldElement::lift(d, x);
    CHECK(lx.residue().equals(x));
    // lift(1) == 1
    CHECK(FieldElement::lift(d, FieldElement::one(rf)).is_one());
    // residue(1 + 2u) == 1
    auto two = FieldElement::from_int(d, 2);
    auto e = FieldElement::one(d).add(two.mul(lx));
    CHECK(e.residue().is_one());
    // the chosen section is multiplicative on monomials:
    // lift(x)*lift(x) - lift(x^2) has valuation >= 1 (here certified zero)
    auto diff = lx.mul(lx).sub(FieldElement::lift(d, x.mul(x)));
    CHECK(diff.is_zero_at_precision());
    // fractions with odd denominator: residue((1+2x~)/(3)) = 1
    auto q = e.div(FieldElement::from_int(d, 3));
    CHECK(q.residue().is_one());
}

TEST_CASE("teich pole handling and precision bookkeeping") {
    auto d = make_teich(make_gf(1), 12);
    auto two = FieldElement::from_int(d, 2);
    auto half = two.inv();
    CHECK(half.val() == Zinf::of(-1));
    CHECK(half.mul(two).is_one());
    // adding elements of different scale keeps the lower absolute precision
    auto big = two.pow_int(5);
    auto sum = half.add(big);
    CHECK(sum.val() == Zinf::of(-1));
    // precision loss below the floor raises instead of guessing
    auto tiny = two.pow_int(11);
    CHECK(!tiny.is_zero_certified());
    CHECK(tiny.val() == Zinf::of(11));
}

TEST_CASE("eis2 ramified extension: val(2) = 2 and pi^2 = 2u") {
    auto rf = make_ratfun(make_gf(1), {"x"});
    auto base = make_teich(rf, 16);
    auto d = make_eis2(base, FieldElement::one(base));
    auto pi = FieldElement::uniformizer(d);
    CHECK(pi.val() == Zinf::of(1));
    // pi^2 = 2
    auto two = FieldElement::from_int(d, 2);
    CHECK(pi.mul(pi).sub(two).is_zero_at_precision());
    CHECK(e_F(d) == Zinf::of(2));
    // residue map factors through the base
    auto x = FieldElement::variable(rf, 0);
    auto lx = FieldElement::lift(d, x);
    CHECK(lx.residue().equals(x));
    // inverse of a unit
    auto u = FieldElement::one(d).add(pi);
    CHECK(u.mul(u.inv()).sub(FieldElement::one(d)).is_zero_at_precision());
    CHECK(u.inv().val() == Zinf::of(0));
}

TEST_CASE("hensel_quadratic on the three spec shapes") {
    auto d = make_teich(make_gf(1), 16);
    auto zero = FieldElement::zero(d);
    auto one = FieldElement::one(d);
    auto two = FieldElement::from_int(d, 2);
    // linear case (a0 = 0): root of t - beta is beta
    auto beta = FieldElement::from_int(d, 7);
    auto r1 = hensel_quadratic(zero, one, beta.neg());
    CHECK(r1.sub(beta).is_zero_at_precision());
    // 2t^2 + t - 1 has a unique integral root with residue 1
    auto r2 = hensel_quadratic(two, one, one.neg());
    auto res = two.mul(r2).mul(r2).add(r2).sub(one);
    CHECK(res.is_zero_at_precision());
    CHECK(r2.residue().is_one());
    // (pi, 1, 0) -> 0
    auto r3 = hensel_quadratic(two, one, zero);
    CHECK(r3.is_zero_at_precision());
    // 2-Henselian property on sampled data
    Sampler s(4242);
    for (int i = 0; i < 20; ++i) {
        auto a0 = two.mul(s.teich(d));
        auto a2 = s.teich(d);
        auto root = hensel_quadratic(a0, one, a2);
        auto chk = a0.mul(root).mul(root).add(root).add(a2);
        CHECK(chk.is_zero_at_precision());
    }
}

TEST_CASE("field axioms for teich on samples") {
    auto rf = make_ratfun(make_gf(1), {"x", "y"});
    auto d = make_teich(rf, 14);
    Sampler s(31337);
    for (int i = 0; i < 25; ++i) {
        auto a = s.teich(d), b = s.teich(d), c = s.teich(d);
        CHECK(a.add(b).sub(b.add(a)).is_zero_at_precision());
        CHECK(a.mul(b.add(c)).sub(a.mul(b).add(a.mul(c))).is_zero_at_precision());
        CHECK(a.mul(b).mul(c).sub(a.mul(b.mul(c))).is_zero_at_precision());
        if (!a.is_zero_at_precision()) {
            try {
                auto ai = a.inv();
                CHECK(a.mul(ai).sub(FieldElement::one(d)).is_zero_at_precision());
            } catch (const PrecisionExhausted&) {
                // acceptable for elements of large valuation
            }
        }
        // valuation axioms where defined
        try {
            if (!a.is_zero_at_precision() && !b.is_zero_at_precision())
                CHECK(a.mul(b).val() == a.val() + b.val());
        } catch (const PrecisionExhausted&) {}
    }
}

TEST_CASE("val(2) over eis2(teich(laurent-residue-model)) is 2 (ramified adjunction)") {
    // the ramified example field: adjoining sqrt(2) makes sqrt(2) a uniformizer
    auto rf = make_ratfun(make_gf(1), {"x"});
    auto base = make_teich(rf, 16);
    auto d = make_eis2(base, FieldElement::one(base));
    CHECK(FieldElement::from_int(d, 2).val() == Zinf::of(2));
}
