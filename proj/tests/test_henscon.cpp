#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conival/henscon.hpp"
#include "conival/report.hpp"
#include "conival/symcheck.hpp"

using namespace conival;

namespace {
DescPtr teich2() { return make_teich(make_ratfun(make_gf(1), {"x", "y"}), 14); }
DescPtr laur2() { return make_laurent(make_ratfun(make_gf(1), {"x", "y"}), 10); }

FieldElement lx(const DescPtr& F, int i) {
    return FieldElement::lift(F, FieldElement::variable(F->residue_desc(), i));
}
} // namespace

TEST_CASE("enlargement dispatch: the three unit cases and the prime case") {
    auto F = teich2();
    auto x = lx(F, 0);
    auto pi = FieldElement::uniformizer(F);
    auto L = sep_quadratic(F, 1, FieldElement::one(F), x, false);
    // prime: e = 2, tex unchanged, residue = base residue
    auto pv = predict_and_verify(L, pi);
    CHECK(pv.e == 2);
    CHECK(pv.tex == 1);
    // odd unit d = 1: e = 2, tex = tex(P) - 0
    auto pv2 = predict_and_verify(L, FieldElement::one(F).sub(pi.mul(lx(F, 1))));
    CHECK(pv2.e == 2);
    CHECK(pv2.tex == 1);
    // even unit d = 0: e = 1, tex unchanged, residue grows
    auto pv3 = predict_and_verify(L, FieldElement::one(F).sub(lx(F, 1)));
    CHECK(pv3.e == 1);
    CHECK(pv3.tex == 1);
    // a square-residue even-unit scalar aborts with an isotropy error
    CHECK_THROWS_AS(enlarge(L, FieldElement::one(F).sub(x.mul(x))), IsotropicResult);
}

TEST_CASE("odd-unit cases with larger trace exponent over a characteristic-2 base") {
    auto F = laur2();
    auto rf = F->residue_desc();
    auto x = FieldElement::lift(F, FieldElement::variable(rf, 0));
    auto pi = FieldElement::uniformizer(F);
    // e_F = infinity: tex(L) = r for every r
    auto L = sep_quadratic(F, 3, FieldElement::one(F), x, false);
    CHECK(trace_exponent(L).tex == 3);
    // d = 3 < 2 tex: tex drops by (d-1)/2 = 1
    auto pv = predict_and_verify(L, FieldElement::one(F).sub(pi.pow_int(3).mul(lx(F, 1))));
    CHECK(pv.e == 2);
    CHECK(pv.tex == 2);
    // d = 2 even: tex drops by 1, e stays 1
    auto pv2 = predict_and_verify(L, FieldElement::one(F).sub(pi.pow_int(2).mul(lx(F, 1))));
    CHECK(pv2.e == 1);
    CHECK(pv2.tex == 2);
}

TEST_CASE("chagore dichotomy at d = 2 tex") {
    auto F = teich2();
    auto x = lx(F, 0);
    auto y = lx(F, 1);
    auto L = sep_quadratic(F, 1, FieldElement::one(F), x, false);
    // beta with residue datum outside the Artin-Schreier image: tame output
    auto ch = chagore_test(L, y);
    CHECK(ch.anisotropic_tame);
    REQUIRE(ch.Q.has_value());
    auto ram = ramification_and_residue(*ch.Q);
    CHECK(ram.e == 1);
    CHECK_FALSE(ram.wild);
    CHECK(trace_exponent(*ch.Q).tex == 0);
    // beta = 0 is degenerate: mu = 1 is a norm
    CHECK_THROWS_AS(enlarge(L, FieldElement::one(F)), IsotropicResult);
    // beta whose datum is a wp-image member: isotropic with witness.  Build
    // the datum as an actual value of the residue Artin-Schreier map.
    auto om = omega_invariant(L);
    long tex = trace_exponent(L).tex;
    auto Kb = residue_insep_ext(L);
    auto sb = residue_s_w0(L, om.regular_w0, tex);
    FieldElement datum = artin_schreier(Kb, sb, k_basis(Kb, 1)); // wp(sqrt x-bar)
    FieldElement beta = FieldElement::lift(F, datum).div(L.C.n(om.regular_w0));
    auto ch2 = chagore_test(L, beta);
    CHECK_FALSE(ch2.anisotropic_tame);
    REQUIRE(ch2.iso_witness.has_value());
}

TEST_CASE("normal form quaternions and octonions") {
    auto F = teich2();
    auto x = lx(F, 0);
    auto y = lx(F, 1);
    auto L = sep_quadratic(F, 1, FieldElement::one(F), x, false);
    // first alternative: e = 1, residue L-bar(sqrt(alpha-bar))
    auto B1 = normal_form_quaternion(L, y, NFCase::Unramified);
    auto ram1 = ramification_and_residue(B1);
    CHECK(ram1.e == 1);
    CHECK(ram1.f == 4);
    CHECK(trace_exponent(B1).tex == 1);
    // prime alternative: e = 2, residue L-bar
    auto B2 = normal_form_quaternion(L, FieldElement::one(F), NFCase::PrimeRamified);
    auto ram2 = ramification_and_residue(B2);
    CHECK(ram2.e == 2);
    CHECK(ram2.f == 2);
    // octonion first alternative over a three-variable residue field
    auto F3 = make_teich(make_ratfun(make_gf(1), {"x", "y", "z"}), 12);
    auto L3 = sep_quadratic(F3, 1, FieldElement::one(F3), lx(F3, 0), false);
    auto O = normal_form_octonion(L3, lx(F3, 1), lx(F3, 2), NFCase::Unramified);
    auto ramO = ramification_and_residue(O);
    CHECK(ramO.e == 1);
    CHECK(ramO.f == 8);
    CHECK(trace_exponent(O).tex == 1);
    // octonions from the tower are alternative (sampled identity check)
    auto rep = check_identity(O.C, IdentityName::LeftAlt, 24);
    CHECK(rep.verdict == IdentityReport::Verdict::HoldsToPrecision);
}

TEST_CASE("preassigned valuation data and constraint violations") {
    auto F = teich2();
    auto xb = FieldElement::variable(F->residue_desc(), 0);
    auto yb = FieldElement::variable(F->residue_desc(), 1);
    // (e=1, n=0, r=e_F) -> the base field
    auto C0 = preassigned(F, 1, 0, 1, {});
    CHECK(C0.C.dim == 1);
    // (e=2, n=0, r): ramified quadratic
    auto C1 = preassigned(F, 2, 0, 1, {});
    CHECK(C1.C.dim == 2);
    CHECK(ramification_and_residue(C1).e == 2);
    // (e=1, n=2, r=1): quaternion with residue k(sqrt x, sqrt y)
    auto C2 = preassigned(F, 1, 2, 1, {FieldElement::lift(F, xb), FieldElement::lift(F, yb)});
    CHECK(C2.C.dim == 4);
    CHECK(ramification_and_residue(C2).f == 4);
    // r > e_F violates the constraints
    CHECK_THROWS_AS(preassigned(F, 1, 1, 5, {FieldElement::lift(F, xb)}), ConstraintViolation);
}

TEST_CASE("pairs family: identical invariants, distinguished residues") {
    // needs tex headroom: r = 2 > s = 1 over a characteristic-2 Laurent base
    auto F = laur2();
    auto x = lx(F, 0);
    auto y = lx(F, 1);
    auto fam = pairs_family(F, {x}, y, 2, 1, 3);
    REQUIRE(fam.algebras.size() == 3);
    for (auto& C : fam.algebras) {
        auto ram = ramification_and_residue(C);
        CHECK(ram.e == 1);
        CHECK(ram.f == 4);
        CHECK(trace_exponent(C).tex == 1);
    }
}

TEST_CASE("the unramified wild tower over a teich base") {
    auto F = teich2();
    for (int n = 0; n <= 2; ++n) {
        auto C = build_teich_family(F, n);
        CHECK(C.C.dim == (1u << n));
        auto ram = ramification_and_residue(C);
        CHECK(ram.e == 1);
        if (n > 0) {
            CHECK(trace_exponent(C).tex == 1);
            CHECK(ram.wild);
            auto lv = lambda_normed_check(C);
            CHECK(lv.lambda_valued);
            // residue field is K_n = F-bar(sqrt x1, ..., sqrt xn)
            auto K = residue_insep_ext(C);
            CHECK(K.n() == n);
        }
    }
}

TEST_CASE("laurent chains: lambda-valued division algebras up to dimension 16") {
    for (int n = 2; n <= 4; ++n) {
        auto C = build_laur_family(n, 8);
        CHECK(C.C.dim == (1u << n));
        auto ram = ramification_and_residue(C);
        CHECK(ram.e == 2);
        auto lv = lambda_normed_check(C, 12);
        CHECK(lv.lambda_normed);
        CHECK(lv.lambda_valued);
    }
}

TEST_CASE("heights attain omega with the attached witnesses") {
    auto F = teich2();
    auto x = lx(F, 0);
    auto y = lx(F, 1);
    auto pi = FieldElement::uniformizer(F);
    auto L = sep_quadratic(F, 1, FieldElement::one(F), x, false);
    // wild unramified quaternion (unitary, e = 1): hcom = omega = tex
    auto Cu = normal_form_quaternion(L, y, NFCase::Unramified);
    auto h1 = heights(Cu);
    CHECK(h1.hcom == omega_invariant(Cu).omega);
    // primary quaternion: hcom = omega = tex
    auto Cp = normal_form_quaternion(L, FieldElement::one(F), NFCase::PrimeRamified);
    auto h2 = heights(Cp);
    CHECK(h2.hcom == omega_invariant(Cp).omega);
    // wild unitary ramified: omega = tex - 1/2 attained
    auto Cr = normal_form_quaternion(L, FieldElement::one(F), NFCase::UnitRamified);
    auto h3 = heights(Cr);
    CHECK(h3.hcom == omega_invariant(Cr).omega);
    CHECK(h3.hcom.twice() % 2 == 1);
    // octonion: both heights equal omega
    auto F3 = make_teich(make_ratfun(make_gf(1), {"x", "y", "z"}), 12);
    auto L3 = sep_quadratic(F3, 1, FieldElement::one(F3), lx(F3, 0), false);
    auto O = normal_form_octonion(L3, lx(F3, 1), lx(F3, 2), NFCase::Unramified);
    auto hO = heights(O);
    CHECK(hO.hcom == omega_invariant(O).omega);
    CHECK(hO.hass == omega_invariant(O).omega);
    // dimension <= 2: infinite heights
    auto hL = heights(L);
    CHECK(hL.hcom.is_infinity());
}
