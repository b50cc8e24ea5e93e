#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conival/henscon.hpp"
#include "conival/report.hpp"

using namespace conival;

namespace {
DescPtr teich1() { return make_teich(make_ratfun(make_gf(1), {"x"}), 16); }
DescPtr teich2() { return make_teich(make_ratfun(make_gf(1), {"x", "y"}), 14); }
} // namespace

TEST_CASE("base field invariants: tex = omega = e_F with w0 = pi^{e_F}/2") {
    auto F = teich1();
    auto S = base_valued(F);
    auto tex = trace_exponent(S);
    CHECK(tex.tex == 1); // lambda(2) = 1 on the unramified model
    auto om = omega_invariant(S);
    CHECK(om.omega == Zinf::of(1));
    // w0 = pi/2 is a unit
    CHECK(lambda_Q(S, om.regular_w0) == Zinf::of(0));
    auto ram = ramification_and_residue(S);
    CHECK(ram.e == 1);
    CHECK(ram.f == 1);
    CHECK(ram.wild); // residue characteristic 2
}

TEST_CASE("lambda_Q axioms on a ramified quadratic extension") {
    auto F = teich1();
    auto L = sep_quadratic(F, 1, FieldElement::one(F), FieldElement::one(F), true);
    auto ram = ramification_and_residue(L);
    CHECK(ram.e == 2);
    CHECK(ram.f == 1);
    // lambda_Q(Pi) = 1/2 and lambda_Q(pi x) = 1 + lambda_Q(x)
    const Vec& Pi = L.lat.marks.at("Pi");
    CHECK(lambda_Q(L, Pi).twice() == 1);
    auto pi = FieldElement::uniformizer(F);
    CHECK(lambda_Q(L, L.C.smul(pi, Pi)).twice() == 3);
    CHECK(lambda_Q(L, L.C.unit) == Zinf::of(0));
    // tex = min(e_F, r) = 1
    CHECK(trace_exponent(L).tex == 1);
}

TEST_CASE("unramified wild quadratic: residue is F-bar(sqrt(beta))") {
    auto F = teich1();
    auto rf = F->residue_desc();
    auto x = FieldElement::lift(F, FieldElement::variable(rf, 0));
    auto L = sep_quadratic(F, 1, FieldElement::one(F), x, false);
    auto ram = ramification_and_residue(L);
    CHECK(ram.e == 1);
    CHECK(ram.f == 2);
    CHECK(ram.wild);
    // residue form is the squaring form on F-bar(sqrt(x-bar))
    auto K = residue_insep_ext(L);
    CHECK(K.n() == 1);
    CHECK(K.gens[0].equals(FieldElement::variable(rf, 0)));
    CHECK(trace_exponent(L).tex == 1);
    CHECK(omega_invariant(L).omega == Zinf::of(1)); // e = 1 forces omega = tex
}

namespace {
// independent oracle: distance of an odd integer from the squares mod 2^k
long defect_brute(long long a, int kbits) {
    long best = 0;
    const long long M = 1ll << kbits;
    for (long long v = 1; v < M; v += 2) {
        long long d = ((a - v * v) % M + M) % M;
        if (d == 0) return kbits; // square to full precision
        long c = 0;
        while (!(d & 1)) { d >>= 1; ++c; }
        best = std::max(best, c);
    }
    return best;
}
} // namespace

TEST_CASE("norm exponent over the one-dimensional space: quadratic defect values") {
    // oracle: brute-force square search mod 2^12
    CHECK(defect_brute(5, 12) == 2);
    CHECK(defect_brute(-1, 12) == 1);
    CHECK(defect_brute(17, 12) == 12); // 17 is a 2-adic square
    auto F = make_teich(make_gf(1), 16);
    auto S = base_valued(F);
    auto n5 = norm_exponent(S, FieldElement::from_int(F, 5));
    CHECK_FALSE(n5.infinite);
    CHECK(n5.nexp == 2);
    auto nm1 = norm_exponent(S, FieldElement::from_int(F, -1));
    CHECK_FALSE(nm1.infinite);
    CHECK(nm1.nexp == 1);
    auto n17 = norm_exponent(S, FieldElement::from_int(F, 17));
    CHECK(n17.infinite);
    // the square witness reassembles 17 to precision
    FieldElement acc = FieldElement::one(F);
    for (auto& v : n17.norm_factors) acc = acc.mul(S.C.n(v));
    CHECK(acc.sub(FieldElement::from_int(F, 17)).is_zero_at_precision());
}

TEST_CASE("local norm certificate identity at precision") {
    auto F = teich1();
    auto S = base_valued(F);
    // beta = 1: the local square theorem instance 1 - 8 beta = square
    auto beta = FieldElement::one(F);
    auto gamma = local_norm_certificate(S, beta);
    (void)gamma; // the identity recheck lives inside the call
    // beta = 0 gives gamma = 0
    auto g0 = local_norm_certificate(S, FieldElement::zero(F));
    CHECK(g0.is_zero_at_precision());
    // a wild quadratic instance rechecked by evaluation
    auto rf = F->residue_desc();
    auto x = FieldElement::lift(F, FieldElement::variable(rf, 0));
    auto L = sep_quadratic(F, 1, FieldElement::one(F), x, false);
    auto g = local_norm_certificate(L, x);
    (void)g;
}

TEST_CASE("norm exponent respects norm classes on sampled instances") {
    auto F = teich1();
    auto rf = F->residue_desc();
    auto x = FieldElement::lift(F, FieldElement::variable(rf, 0));
    auto L = sep_quadratic(F, 1, FieldElement::one(F), x, false);
    auto pi = FieldElement::uniformizer(F);
    // alpha and alpha * n(v) have the same norm exponent
    FieldElement alpha = FieldElement::one(F).sub(pi.mul(x));
    auto n1 = norm_exponent(L, alpha);
    Vec v = L.C.add(L.C.unit, L.C.smul(pi, L.C.basis(1)));
    FieldElement alpha2 = alpha.mul(L.C.n(v));
    auto n2 = norm_exponent(L, alpha2);
    CHECK_FALSE(n1.infinite);
    CHECK_FALSE(n2.infinite);
    CHECK(n1.nexp == n2.nexp);
    CHECK(n1.nexp == 1); // odd defect with unit coefficient
}

TEST_CASE("nexp bounded by 2 omega (local norm theorem) on sampled units") {
    auto F = teich1();
    auto rf = F->residue_desc();
    auto x = FieldElement::lift(F, FieldElement::variable(rf, 0));
    auto L = sep_quadratic(F, 1, FieldElement::one(F), x, false);
    long two_omega = omega_invariant(L).omega.twice();
    auto pi = FieldElement::uniformizer(F);
    std::vector<FieldElement> units;
    units.push_back(FieldElement::from_int(F, 3));
    units.push_back(FieldElement::one(F).add(pi.mul(x)));
    units.push_back(FieldElement::one(F).add(pi.pow_int(2).mul(x)));
    units.push_back(x);
    units.push_back(x.add(pi));
    for (auto& u : units) {
        auto r = norm_exponent(L, u);
        if (!r.infinite) CHECK(2 * r.nexp <= 2 * two_omega);
    }
}

TEST_CASE("type classification dichotomy") {
    auto F = teich1();
    auto rf = F->residue_desc();
    auto x = FieldElement::lift(F, FieldElement::variable(rf, 0));
    auto L = sep_quadratic(F, 1, FieldElement::one(F), x, false);
    auto pi = FieldElement::uniformizer(F);
    // Cay(L, pi): primary
    auto Cp = enlarge(L, pi);
    CHECK(classify_type(Cp) == "primary");
    CHECK(omega_invariant(Cp).omega == Zinf::of(trace_exponent(Cp).tex));
    // Cay(L, 1 - pi): unitary wild e=2 with omega = tex - 1/2
    auto Cu = enlarge(L, FieldElement::one(F).sub(pi));
    CHECK(classify_type(Cu) == "unitary");
    auto om = omega_invariant(Cu);
    CHECK(om.omega.twice() == 2 * trace_exponent(Cu).tex - 1);
}

TEST_CASE("lambda-normed and lambda-valued checks") {
    auto F = teich2();
    auto rf = F->residue_desc();
    auto C2 = build_teich_family(F, 1);
    auto rep = lambda_normed_check(C2);
    CHECK(rep.lambda_normed);
    CHECK(rep.lambda_valued);
    (void)rf;
}

TEST_CASE("invariant report serializes deterministically") {
    auto F = teich1();
    auto rf = F->residue_desc();
    auto x = FieldElement::lift(F, FieldElement::variable(rf, 0));
    auto L = sep_quadratic(F, 1, FieldElement::one(F), x, false);
    auto r1 = make_report(L).to_json().dump();
    auto r2 = make_report(L).to_json().dump();
    CHECK(r1 == r2);
    CHECK(r1.find("\"e\":1") != std::string::npos);
}
