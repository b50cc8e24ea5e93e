#include "conival/sqclass.hpp"

#include "conival/linalg.hpp"

namespace conival {
namespace sqclass {

int num_classes(const DescPtr& d) {
    if (!d->is_exact()) throw Unsupported("square classes need an exact characteristic-2 kind");
    return 1 << d->num_vars();
}

std::vector<FieldElement> sqrt_coords(const FieldElement& f) {
    const DescPtr& d = f.desc;
    int nc = num_classes(d);
    std::vector<FieldElement> out(static_cast<size_t>(nc), FieldElement::zero(d));
    if (f.is_zero_certified()) return out;
    if (d->kind == FieldKind::GF2k) {
        out[0] = *sqrt_char2(f);
        return out;
    }
    GF2Ring G{d->gf_degree()};
    int r = d->num_vars();
    // work with the polynomial num*den over the common denominator den^2
    auto g = poly_mul(G, f.rnum, f.rden);
    std::vector<MPoly<GF2Ring>> part(static_cast<size_t>(nc));
    for (auto& [m, c] : g.terms) {
        int J = 0;
        Mono half = 0;
        for (int v = 0; v < r; ++v) {
            int e = mono_exp(m, v);
            if (e & 1) J |= (1 << v);
            half += mono_var(v, e / 2);
        }
        poly_add_term(G, part[static_cast<size_t>(J)], half, G.sqrt(c));
    }
    for (int J = 0; J < nc; ++J) {
        if (part[static_cast<size_t>(J)].is_zero()) continue;
        FieldElement c;
        c.desc = d;
        c.rnum = std::move(part[static_cast<size_t>(J)]);
        c.rden = f.rden;
        c.normalize();
        out[static_cast<size_t>(J)] = std::move(c);
    }
    return out;
}

bool is_square(const FieldElement& f) { return sqrt_char2(f).has_value(); }

bool p_independent(const std::vector<FieldElement>& xs) {
    if (xs.empty()) return true;
    const DescPtr& d = xs[0].desc;
    int q = static_cast<int>(xs.size());
    int nc = num_classes(d);
    if ((1 << q) > nc) return false;
    Mat rows;
    for (int mask = 0; mask < (1 << q); ++mask) {
        FieldElement prod = FieldElement::one(d);
        for (int i = 0; i < q; ++i)
            if ((mask >> i) & 1) prod = prod.mul(xs[static_cast<size_t>(i)]);
        rows.push_back(sqrt_coords(prod));
    }
    return mat_rank(rows) == static_cast<size_t>(1 << q);
}

std::optional<std::vector<FieldElement>> module_sqrt_coords(const FieldElement& beta,
                                                            const std::vector<FieldElement>& gens) {
    const DescPtr& d = beta.desc;
    int nc = num_classes(d);
    // unknowns lambda_i; equations per class J: sum_i lambda_i c_i,J = beta_J
    Mat a(static_cast<size_t>(nc), Vec(gens.size(), FieldElement::zero(d)));
    for (size_t i = 0; i < gens.size(); ++i) {
        auto ci = sqrt_coords(gens[i]);
        for (int J = 0; J < nc; ++J) a[static_cast<size_t>(J)][i] = ci[static_cast<size_t>(J)];
    }
    Vec b = sqrt_coords(beta);
    return solve_linear(d, a, b);
}

} // namespace sqclass
} // namespace conival
