#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conival/ksym.hpp"

using namespace conival;

namespace {

DescPtr teich1() { return make_teich(make_ratfun(make_gf(1), {"x"}), 16); }
DescPtr teich3() { return make_teich(make_ratfun(make_gf(1), {"x", "y", "z"}), 12); }

// the ramified quadratic model: residue GF(2)(x) with sqrt(2) adjoined
DescPtr rameg_field() {
    auto base = make_teich(make_ratfun(make_gf(1), {"x"}), 16);
    return make_eis2(base, FieldElement::one(base));
}

Symbol sym(const DescPtr& F, std::vector<FieldElement> es) {
    Symbol s;
    s.F = F;
    s.entries = std::move(es);
    return s;
}

} // namespace

TEST_CASE("depth of k1 classes over the unramified model") {
    auto F = make_teich(make_gf(1), 16);
    // frozen oracle values: {5} -> 2, {-1} -> 1, {17} -> zero
    auto d5 = depth_k1(FieldElement::from_int(F, 5));
    CHECK_FALSE(d5.zero);
    CHECK(d5.depth == 2);
    auto dm1 = depth_k1(FieldElement::from_int(F, -1));
    CHECK(dm1.depth == 1);
    auto d17 = depth_k1(FieldElement::from_int(F, 17));
    CHECK(d17.zero);
    // odd valuation: depth 0 tame component
    auto d2 = depth_k1(FieldElement::from_int(F, 2));
    CHECK(d2.ramified);
    CHECK(d2.depth == 0);
    CHECK(kato_bound_m(F) == 2);
}

TEST_CASE("ramified example: depths 3 and 2 and the split quaternion") {
    auto F = rameg_field();
    CHECK(kato_bound_m(F) == 4);
    auto pi = FieldElement::uniformizer(F); // sqrt(2)
    auto rf = F->residue_desc();
    auto u = FieldElement::lift(F, FieldElement::variable(rf, 0)); // residue x
    auto a = FieldElement::one(F).add(pi.pow_int(3));
    auto b = FieldElement::one(F).add(FieldElement::from_int(F, 2).mul(u));
    CHECK(depth_k1(a).depth == 3);
    CHECK(depth_k1(b).depth == 2);
    // {a, b} has depth >= 5 > m = 4 by the filtration product rule, so the
    // symbol is zero and the corresponding quaternion form is isotropic
    CHECK(depth_k1(a).depth + depth_k1(b).depth > kato_bound_m(F));
    auto g = gather(sym(F, {a, b}));
    CHECK(g.zero);
}

TEST_CASE("pump preserves depth and the initial-form verdicts") {
    auto F = rameg_field();
    auto pi = FieldElement::uniformizer(F);
    auto one = FieldElement::one(F);
    // (i = j = 1, a = b = 1): {1 + pi^2/(1+pi), -(1+pi)}
    auto pumped = pump(F, 1, one, 1, one);
    REQUIRE(pumped.entries.size() == 2);
    // both presentations denote the same class: compare gathered depth
    auto orig = sym(F, {one.add(pi), one.add(pi)});
    auto g1 = gather(orig);
    auto g2 = gather(pumped);
    CHECK(g1.zero == g2.zero);
    if (!g1.zero) {
        CHECK(g1.depth == g2.depth);
        CHECK(g1.form.component == g2.form.component);
    }
    // units in, units out
    auto d = pumped.entries[1].div(pi.pow_int(pumped.entries[1].val().as_integer()));
    CHECK(d.val() == Zinf::of(0));
}

TEST_CASE("gathering: shapes and postconditions") {
    auto F = teich3();
    auto rf = F->residue_desc();
    auto pi = FieldElement::uniformizer(F);
    auto x = FieldElement::lift(F, FieldElement::variable(rf, 0));
    auto y = FieldElement::lift(F, FieldElement::variable(rf, 1));
    // already gathered: {u, a} with depth{u} = 0 = depth gamma
    auto g1 = gather(sym(F, {x, y}));
    CHECK_FALSE(g1.zero);
    CHECK(g1.depth == 0);
    // {1 + 2x~, pi}: u-part depth 1; the prime tail entry is exchanged for a
    // unit one (the tail valuation is freely adjustable at odd depth)
    auto u = FieldElement::one(F).add(FieldElement::from_int(F, 2).mul(x));
    auto g2 = gather(sym(F, {u, pi}));
    CHECK_FALSE(g2.zero);
    CHECK(g2.depth == 1);
    CHECK(depth_k1(g2.u).depth == 1);
    for (auto& a : g2.alpha) CHECK(depth_k1(a).depth == 0);
    // {1+pi, 1+pi} pumps into {1 + c pi^2, d pi} and gathers
    auto g3 = gather(sym(F, {FieldElement::one(F).add(pi), FieldElement::one(F).add(pi)}));
    CHECK_FALSE(g3.zero);
    CHECK(g3.depth >= 1);
    // depth{u} equals the gathered depth by construction
    if (!g3.zero) CHECK(depth_k1(g3.u).depth == g3.depth);
}

TEST_CASE("e_gamma classification") {
    auto F = teich3();
    auto rf = F->residue_desc();
    auto pi = FieldElement::uniformizer(F);
    auto x = FieldElement::lift(F, FieldElement::variable(rf, 0));
    // odd depth: e = 2
    auto g1 = sym(F, {FieldElement::one(F).sub(pi.mul(x)), x});
    CHECK(depth_of(g1) == 1);
    CHECK(e_gamma(g1) == 2);
    // tame-symbol component at even depth: e = 2
    auto g2 = sym(F, {x, pi});
    CHECK(depth_of(g2) == 0);
    CHECK(e_gamma(g2) == 2);
    // unit symbol of depth 0: e = 1
    auto g3 = sym(F, {FieldElement::one(F).sub(x), x.mul(x).add(x).add(FieldElement::one(F))});
    CHECK(e_gamma(sym(F, {FieldElement::one(F).sub(x)})) == 1);
    (void)g3;
}

TEST_CASE("local norm bound in K-theoretic form") {
    auto F = teich1();
    auto rf = F->residue_desc();
    auto pi = FieldElement::uniformizer(F);
    auto x = FieldElement::lift(F, FieldElement::variable(rf, 0));
    auto gamma = sym(F, {FieldElement::one(F).sub(x)});
    // a = 1: {1} gamma = 0 and the norm exponent is infinite
    auto r1 = lnt_k(gamma, FieldElement::one(F));
    CHECK(r1.product_zero);
    // a = 1 - pi beta with unit beta: nexp = 1 and depth{a gamma} >= 1 + 0
    auto a = FieldElement::one(F).sub(pi.mul(x));
    auto r2 = lnt_k(gamma, a);
    CHECK_FALSE(r2.product_zero);
    CHECK_FALSE(r2.nexp_infinite);
    CHECK(r2.nexp == 1);
    CHECK(r2.inequality_ok);
}

TEST_CASE("dictionary: symbols against the enlargement constructors") {
    auto F = teich3();
    auto rf = F->residue_desc();
    auto pi = FieldElement::uniformizer(F);
    auto x = FieldElement::lift(F, FieldElement::variable(rf, 0));
    auto y = FieldElement::lift(F, FieldElement::variable(rf, 1));
    long lam2 = kato_bound_m(F) / 2;
    // q = 1, depth 0 unit: tex = lambda(2), e = 1
    auto d1 = dictionary_check(sym(F, {FieldElement::one(F).sub(x)}));
    CHECK(d1.ok);
    CHECK(d1.e_sym == 1);
    CHECK(d1.tex == lam2);
    // q = 1, prime entry: e = 2
    auto d2 = dictionary_check(sym(F, {pi.mul(FieldElement::one(F).add(x))}));
    CHECK(d2.ok);
    CHECK(d2.e_sym == 2);
    // q = 2 with odd-depth head: unitary quaternion
    auto d3 = dictionary_check(sym(F, {FieldElement::one(F).sub(pi.mul(y)), x}));
    CHECK(d3.ok);
    CHECK(d3.e_alg == 2);
    CHECK(d3.type == "unitary");
    // q = 2 with top-depth head: tame
    auto d4 = dictionary_check(sym(F, {FieldElement::one(F).sub(pi.pow_int(2).mul(y)), x}));
    CHECK(d4.ok);
    CHECK(d4.tame);
    CHECK(d4.tex == 0);
    // q = 3 octonion instance
    auto z = FieldElement::lift(F, FieldElement::variable(rf, 2));
    auto d5 = dictionary_check(sym(F, {FieldElement::one(F).sub(pi.mul(z)), x, y}));
    CHECK(d5.ok);
    CHECK(d5.e_alg == 2);
}
