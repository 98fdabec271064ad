#include "qs3/linalg.hpp"

namespace qs3 {

namespace {

// Pivot choice: a nonzero rational if possible (keeps expressions small and,
// for the certified nullspace, globally invertible), otherwise any entry
// with nonzero canonical form.
int find_pivot(const SMatrix& m, const std::vector<bool>& used_row, std::size_t col,
               bool* constant_pivot) {
    int fallback = -1;
    for (std::size_t r = 0; r < m.size(); ++r) {
        if (used_row[r] || m[r][col].is_zero()) continue;
        if (m[r][col].is_rational()) {
            *constant_pivot = true;
            return static_cast<int>(r);
        }
        if (fallback < 0) fallback = static_cast<int>(r);
    }
    *constant_pivot = false;
    return fallback;
}

}  // namespace

SMatrix smat_identity(std::size_t n) {
    SMatrix m(n, std::vector<ScalarExpr>(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = ScalarExpr::from_int(1);
    return m;
}

ScalarExpr smat_det(SMatrix m) {
    std::size_t n = m.size();
    ScalarExpr det = ScalarExpr::from_int(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) return ScalarExpr();
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det = det * m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col].is_zero()) continue;
            ScalarExpr f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

SMatrix smat_inverse(const SMatrix& m, ErrorCode on_singular, const char* what) {
    std::size_t n = m.size();
    SMatrix a = m;
    SMatrix inv = smat_identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<bool> used(n, false);
        for (std::size_t r = 0; r < col; ++r) used[r] = true;
        bool constant = false;
        int piv = find_pivot(a, used, col, &constant);
        if (piv < 0) throw Error(on_singular, what);
        if (static_cast<std::size_t>(piv) != col) {
            std::swap(a[piv], a[col]);
            std::swap(inv[piv], inv[col]);
        }
        ScalarExpr p = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] = a[col][c] / p;
            inv[col][c] = inv[col][c] / p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            ScalarExpr f = a[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

std::vector<std::vector<ScalarExpr>> smat_nullspace_certified(SMatrix m) {
    if (m.empty()) return {};
    std::size_t rows = m.size(), cols = m[0].size();
    std::vector<int> pivot_row_of_col(cols, -1);
    std::vector<bool> used(rows, false);
    for (std::size_t col = 0; col < cols; ++col) {
        bool constant = false;
        int piv = find_pivot(m, used, col, &constant);
        if (piv < 0) continue;  // free column
        if (!constant)
            throw Error(ErrorCode::NonConstantKernelDimension,
                        "no pivot that is provably invertible on the whole chart");
        used[piv] = true;
        pivot_row_of_col[col] = piv;
        ScalarExpr p = m[piv][col];
        for (std::size_t c = 0; c < cols; ++c) m[piv][c] = m[piv][c] / p;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == static_cast<std::size_t>(piv) || m[r][col].is_zero()) continue;
            ScalarExpr f = m[r][col];
            for (std::size_t c = 0; c < cols; ++c) m[r][c] -= f * m[piv][c];
        }
    }
    std::vector<std::vector<ScalarExpr>> basis;
    for (std::size_t j = 0; j < cols; ++j) {
        if (pivot_row_of_col[j] >= 0) continue;
        std::vector<ScalarExpr> v(cols);
        v[j] = ScalarExpr::from_int(1);
        for (std::size_t c = 0; c < cols; ++c) {
            int pr = pivot_row_of_col[c];
            if (pr >= 0) v[c] = -m[pr][j];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

bool smat_in_row_span(std::vector<std::vector<ScalarExpr>> basis, std::vector<ScalarExpr> v) {
    std::size_t cols = v.size();
    std::vector<bool> used(basis.size(), false);
    for (std::size_t col = 0; col < cols; ++col) {
        int piv = -1;
        for (std::size_t r = 0; r < basis.size(); ++r)
            if (!used[r] && !basis[r][col].is_zero()) {
                piv = static_cast<int>(r);
                break;
            }
        if (piv < 0) continue;
        used[piv] = true;
        ScalarExpr p = basis[piv][col];
        for (std::size_t r = 0; r < basis.size(); ++r) {
            if (r == static_cast<std::size_t>(piv) || basis[r][col].is_zero()) continue;
            ScalarExpr f = basis[r][col] / p;
            for (std::size_t c = 0; c < cols; ++c) basis[r][c] -= f * basis[piv][c];
        }
        if (!v[col].is_zero()) {
            ScalarExpr f = v[col] / p;
            for (std::size_t c = 0; c < cols; ++c) v[c] -= f * basis[piv][c];
        }
    }
    for (const auto& e : v)
        if (!e.is_zero()) return false;
    return true;
}

}  // namespace qs3
