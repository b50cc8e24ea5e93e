#pragma once

#include <optional>
#include <vector>

#include "conival/field.hpp"

namespace conival {

// Dense exact linear algebra over a field element type.  Meant for the small
// systems of this project (dimension at most a few dozen); everything is
// plain Gaussian elimination with exact division.

using Vec = std::vector<FieldElement>;
using Mat = std::vector<Vec>;

inline Mat mat_zero(const DescPtr& d, size_t rows, size_t cols) {
    return Mat(rows, Vec(cols, FieldElement::zero(d)));
}

// Reduce to row echelon form in place; returns the pivot column of each row.
inline std::vector<size_t> row_echelon(Mat& m) {
    std::vector<size_t> pivots;
    if (m.empty()) return pivots;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = rows;
        for (size_t i = r; i < rows; ++i) {
            if (!m[i][c].is_zero_at_precision()) { sel = i; break; }
        }
        if (sel == rows) continue;
        std::swap(m[r], m[sel]);
        FieldElement inv = m[r][c].inv();
        for (size_t j = c; j < cols; ++j) m[r][j] = m[r][j].mul(inv);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero_at_precision()) continue;
            FieldElement f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] = m[i][j].sub(f.mul(m[r][j]));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline size_t mat_rank(Mat m) { return row_echelon(m).size(); }

// Solve A x = b; A is rows x cols, b has length rows.
inline std::optional<Vec> solve_linear(const DescPtr& d, const Mat& a, const Vec& b) {
    if (a.empty()) {
        for (auto& x : b)
            if (!x.is_zero_at_precision()) return std::nullopt;
        return Vec{};
    }
    size_t rows = a.size(), cols = a[0].size();
    Mat m(rows, Vec());
    for (size_t i = 0; i < rows; ++i) {
        m[i] = a[i];
        m[i].push_back(b[i]);
    }
    auto pivots = row_echelon(m);
    // inconsistent if a pivot lands in the augmented column
    for (size_t i = 0; i < pivots.size(); ++i)
        if (pivots[i] == cols) return std::nullopt;
    Vec x(cols, FieldElement::zero(d));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = m[i][cols];
    return x;
}

// Basis of the null space of A.
inline std::vector<Vec> kernel_basis(const DescPtr& d, Mat a) {
    if (a.empty()) return {};
    size_t cols = a[0].size();
    auto pivots = row_echelon(a);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vec v(cols, FieldElement::zero(d));
        v[f] = FieldElement::one(d);
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = a[i][f].neg();
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace conival
