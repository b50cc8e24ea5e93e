#pragma once

#include <optional>
#include <vector>

#include "conival/field.hpp"

namespace conival {

// Square-class machinery for exact characteristic-2 fields k = GF(2^k0) or
// GF(2^k0)(x1..xr).  The coefficient field is perfect, so k is a k^2-vector
// space with basis the square-free variable monomials x^J, J in {0,1}^r, and
// every f decomposes uniquely as f = sum_J c_J^2 x^J.  These coordinates are
// the workhorse behind the 2-independence tests and the Artin-Schreier
// membership oracle.
namespace sqclass {

// Number of parity classes 2^r (r = 0 for gf(2^k0)).
int num_classes(const DescPtr& d);

// Coordinates (c_J)_J with f = sum_J c_J^2 x^J, indexed by the parity bitmask.
std::vector<FieldElement> sqrt_coords(const FieldElement& f);

bool is_square(const FieldElement& f);

// x1..xq are 2-independent over k iff the 2^q subset products are
// k^2-linearly independent.
bool p_independent(const std::vector<FieldElement>& xs);

// Solve beta = sum_i lambda_i^2 gens[i]; returns the lambda_i if solvable.
std::optional<std::vector<FieldElement>> module_sqrt_coords(const FieldElement& beta,
                                                            const std::vector<FieldElement>& gens);

} // namespace sqclass
} // namespace conival
