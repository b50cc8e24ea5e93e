#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conival/insep.hpp"
#include "conival/sqclass.hpp"

using namespace conival;

namespace {

FieldElement rf(const DescPtr& d, const char* which) {
    // tiny expression helper for the tests below
    std::string s(which);
    if (s == "0") return FieldElement::zero(d);
    if (s == "1") return FieldElement::one(d);
    throw std::runtime_error("rf helper");
}

} // namespace

TEST_CASE("square-class coordinates reconstruct the element") {
    auto d = make_ratfun(make_gf(1), {"x", "y"});
    auto x = FieldElement::variable(d, 0);
    auto y = FieldElement::variable(d, 1);
    auto one = FieldElement::one(d);
    std::vector<FieldElement> samples = {
        x, y, x.mul(y), one.add(x), x.mul(x).add(y), one.add(x).div(y),
        x.mul(x).mul(y).add(x).add(one)};
    for (auto& f : samples) {
        auto c = sqclass::sqrt_coords(f);
        FieldElement back = FieldElement::zero(d);
        for (int J = 0; J < 4; ++J) {
            FieldElement mono = FieldElement::one(d);
            if (J & 1) mono = mono.mul(x);
            if (J & 2) mono = mono.mul(y);
            back = back.add(c[J].mul(c[J]).mul(mono));
        }
        CHECK(back.equals(f));
    }
}

TEST_CASE("2-independence tests") {
    auto d = make_ratfun(make_gf(1), {"x", "y"});
    auto x = FieldElement::variable(d, 0);
    auto y = FieldElement::variable(d, 1);
    auto one = FieldElement::one(d);
    CHECK(sqclass::p_independent({x}));
    CHECK(sqclass::p_independent({x, y}));
    CHECK(sqclass::p_independent({x, y.add(x)}));
    CHECK_FALSE(sqclass::p_independent({x, x.mul(y).mul(y)})); // x * y^2 ~ x
    CHECK_FALSE(sqclass::p_independent({x.mul(x)}));           // a square
    CHECK_FALSE(sqclass::p_independent({x, y, x.mul(y)}));
    CHECK(sqclass::p_independent({one.add(x)}));
}

TEST_CASE("module membership with witnesses") {
    auto d = make_ratfun(make_gf(1), {"x", "y"});
    auto x = FieldElement::variable(d, 0);
    auto y = FieldElement::variable(d, 1);
    auto one = FieldElement::one(d);
    // x^3 + y^2 x = (x)^2 x + (y)^2 x is in k^2 x
    auto beta = x.pow_int(3).add(y.mul(y).mul(x));
    auto lam = sqclass::module_sqrt_coords(beta, {x});
    REQUIRE(lam.has_value());
    CHECK((*lam)[0].mul((*lam)[0]).mul(x).equals(beta));
    // y is not in k^2 + k^2 x
    CHECK_FALSE(sqclass::module_sqrt_coords(y, {one, x}).has_value());
}

TEST_CASE("insep extension arithmetic and squares") {
    auto d = make_ratfun(make_gf(1), {"x", "y"});
    auto x = FieldElement::variable(d, 0);
    auto y = FieldElement::variable(d, 1);
    InsepExt K{d, {x, y}};
    auto rx = k_basis(K, 1); // sqrt(x)
    auto ry = k_basis(K, 2); // sqrt(y)
    // sqrt(x)^2 = x
    CHECK(k_square(K, rx).equals(x));
    // sqrt(x) sqrt(y) = sqrt(xy)
    auto prod = k_mul(K, rx, ry);
    CHECK(k_square(K, prod).equals(x.mul(y)));
    // (1 + sqrt x)^2 = 1 + x
    auto u = k_add(K, k_one(K), rx);
    CHECK(k_square(K, u).equals(FieldElement::one(d).add(x)));
    // square_in_K finds sqrt(x^3 y) etc.
    auto w = square_in_K(K, x.pow_int(3).mul(y));
    REQUIRE(w.has_value());
    CHECK(k_square(K, *w).equals(x.pow_int(3).mul(y)));
    // 1 + x = (1 + sqrt x)^2 is a square too
    auto w2 = square_in_K(K, x.add(FieldElement::one(d)));
    REQUIRE(w2.has_value());
    CHECK(k_square(K, *w2).equals(x.add(FieldElement::one(d))));
    // but y stays a non-square in the smaller extension k(sqrt x)
    InsepExt Kx{d, {x}};
    CHECK_FALSE(square_in_K(Kx, y).has_value());
    CHECK_FALSE(square_in_K(Kx, y.add(x)).has_value());
}

TEST_CASE("two_basis_for rebases a twisted unital form") {
    auto d = make_ratfun(make_gf(1), {"x", "y"});
    auto x = FieldElement::variable(d, 0);
    auto y = FieldElement::variable(d, 1);
    InsepExt K{d, {x, y}};
    // s hits a mixed monomial: s(a + b sx + c sy + e sxy) = a + e
    UnitalForm s = coeff_form(K);
    s.row[3] = FieldElement::one(d);
    auto tb = two_basis_for(K, s);
    REQUIRE(tb.roots.size() == 2);
    // postcondition verified inside; check s(1)=1 and slots are 2-independent
    CHECK(s_apply(K, s, tb.monomials[0]).is_one());
    CHECK(sqclass::p_independent(tb.slots));
}

TEST_CASE("artin-schreier membership: one-variable instances") {
    auto d = make_ratfun(make_gf(1), {"x"});
    auto x = FieldElement::variable(d, 0);
    auto one = FieldElement::one(d);
    InsepExt K{d, {x}};
    auto s = coeff_form(K);
    // x is a member with witness sqrt(x)
    auto r1 = in_AS_image(K, s, x);
    CHECK(r1.status == ASStatus::Member);
    REQUIRE(r1.witness.has_value());
    CHECK(artin_schreier(K, s, *r1.witness).equals(x));
    // x^2 = wp(x + sqrt x): the mixed witness
    auto r2 = in_AS_image(K, s, x.mul(x));
    CHECK(r2.status == ASStatus::Member);
    REQUIRE(r2.witness.has_value());
    CHECK(artin_schreier(K, s, *r2.witness).equals(x.mul(x)));
    // 1 is not a member (residue trace obstruction at the x-adic place)
    auto r3 = in_AS_image(K, s, one);
    CHECK(r3.status == ASStatus::NotMember);
    // x + 1: the x-adic place gives residue 1 at level 0 after peeling
    auto r4 = in_AS_image(K, s, x.add(one));
    CHECK(r4.status == ASStatus::NotMember);
}

TEST_CASE("artin-schreier membership: two variables, e.CODIAL-type instance") {
    auto d = make_ratfun(make_gf(1), {"x", "y"});
    auto x = FieldElement::variable(d, 0);
    auto y = FieldElement::variable(d, 1);
    InsepExt K{d, {x}};
    auto s = coeff_form(K);
    // y is not in wp(k) + k^2 x: certified by the odd top degree in y
    auto r = in_AS_image(K, s, y);
    CHECK(r.status == ASStatus::NotMember);
    // y^2 reduces to y and is refuted too
    auto r2 = in_AS_image(K, s, y.mul(y));
    CHECK(r2.status == ASStatus::NotMember);
    // y^2 x + x^3 is a member: (y sqrt x + x sqrt x)^2 ... witness check
    auto beta = y.mul(y).mul(x).add(x.pow_int(3));
    auto r3 = in_AS_image(K, s, beta);
    CHECK(r3.status == ASStatus::Member);
    REQUIRE(r3.witness.has_value());
    CHECK(artin_schreier(K, s, *r3.witness).equals(beta));
}

TEST_CASE("artin-schreier membership agrees with bounded polynomial witness search") {
    // independent oracle: enumerate witnesses u with polynomial coordinates of
    // degree <= 3 over GF(2)(x) and freeze the memberships they certify
    auto d = make_ratfun(make_gf(1), {"x"});
    auto x = FieldElement::variable(d, 0);
    InsepExt K{d, {x}};
    auto s = coeff_form(K);
    auto poly_of_mask = [&](unsigned m) {
        FieldElement p = FieldElement::zero(d);
        for (int i = 0; i < 4; ++i)
            if ((m >> i) & 1) p = p.add(x.pow_int(i));
        return p;
    };
    std::set<std::string> images;
    for (unsigned a = 0; a < 16; ++a)
        for (unsigned b = 0; b < 16; ++b) {
            KElem u = {poly_of_mask(a), poly_of_mask(b)};
            images.insert(artin_schreier(K, s, u).str());
        }
    // every bounded-search member must be confirmed by the oracle
    int confirmed = 0;
    for (unsigned a = 0; a < 16; ++a)
        for (unsigned b = 0; b < 16; ++b) {
            KElem u = {poly_of_mask(a), poly_of_mask(b)};
            auto val = artin_schreier(K, s, u);
            auto r = in_AS_image(K, s, val);
            CHECK(r.status == ASStatus::Member);
            ++confirmed;
        }
    CHECK(confirmed == 256);
    (void)rf;
}
