#pragma once

//
// Dense exact linear algebra over the rationals: reduced row echelon form
// with a tracked row-operation matrix, particular solutions with the
// free-variables-zero convention, and nullspace bases.
//
// Matrices here are small (at most C(d, k) rows/columns for coordinate
// dimension d), so plain fraction-arithmetic Gauss-Jordan is exact, fast
// enough, and fully deterministic.
//

#include "errors.hpp"
#include "rational.hpp"

#include <optional>
#include <vector>

namespace nplectic {

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<Rational> a;  // row-major

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), Rational(0)) {}

    Rational& at(int r, int c) { return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)]; }
    const Rational& at(int r, int c) const { return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::vector<Rational> apply(const std::vector<Rational>& v) const {
        if (static_cast<int>(v.size()) != cols) throw DimensionMismatch("matrix apply size mismatch");
        std::vector<Rational> out(static_cast<std::size_t>(rows), Rational(0));
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                if (at(r, c) != 0 && v[static_cast<std::size_t>(c)] != 0)
                    out[static_cast<std::size_t>(r)] += at(r, c) * v[static_cast<std::size_t>(c)];
        return out;
    }
};

/// M row-reduced to R together with the row operations T (T * M = R).
struct RowReduction {
    Matrix R;
    Matrix T;
    std::vector<int> pivot_cols;  // pivot column of row i, for i < rank
    std::vector<int> free_cols;
    int rank = 0;
};

inline RowReduction row_reduce(const Matrix& M) {
    RowReduction out;
    out.R = M;
    out.T = Matrix::identity(M.rows);
    Matrix& R = out.R;
    Matrix& T = out.T;
    int row = 0;
    for (int col = 0; col < M.cols && row < M.rows; ++col) {
        int pivot = -1;
        for (int r = row; r < M.rows; ++r)
            if (R.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) {
            out.free_cols.push_back(col);
            continue;
        }
        if (pivot != row) {
            for (int c = 0; c < R.cols; ++c) std::swap(R.at(pivot, c), R.at(row, c));
            for (int c = 0; c < T.cols; ++c) std::swap(T.at(pivot, c), T.at(row, c));
        }
        const Rational inv = Rational(1) / R.at(row, col);
        if (inv != 1) {
            for (int c = 0; c < R.cols; ++c) R.at(row, c) *= inv;
            for (int c = 0; c < T.cols; ++c) T.at(row, c) *= inv;
        }
        for (int r = 0; r < M.rows; ++r) {
            if (r == row || R.at(r, col) == 0) continue;
            const Rational factor = R.at(r, col);
            for (int c = 0; c < R.cols; ++c) R.at(r, c) -= factor * R.at(row, c);
            for (int c = 0; c < T.cols; ++c) T.at(r, c) -= factor * T.at(row, c);
        }
        out.pivot_cols.push_back(col);
        ++row;
    }
    for (int col = (out.pivot_cols.empty() ? 0 : out.pivot_cols.back() + 1); col < M.cols; ++col) {
        // columns after the last pivot that the loop never classified
        bool already = false;
        for (int f : out.free_cols)
            if (f == col) already = true;
        if (!already) out.free_cols.push_back(col);
    }
    out.rank = row;
    return out;
}

/// Outcome of one linear solve M x = b against a precomputed reduction.
struct LinearSolve {
    std::optional<std::vector<Rational>> x;       // free variables set to zero
    std::vector<Rational> inconsistency_row;      // lambda with lambda^T M = 0, lambda^T b != 0
    int inconsistent_row_index = -1;
};

inline LinearSolve solve_with(const RowReduction& red, const std::vector<Rational>& b) {
    LinearSolve out;
    const std::vector<Rational> tb = red.T.apply(b);
    for (int r = red.rank; r < red.R.rows; ++r) {
        if (tb[static_cast<std::size_t>(r)] != 0) {
            out.inconsistent_row_index = r;
            out.inconsistency_row.resize(static_cast<std::size_t>(red.T.cols));
            for (int c = 0; c < red.T.cols; ++c)
                out.inconsistency_row[static_cast<std::size_t>(c)] = red.T.at(r, c);
            return out;
        }
    }
    std::vector<Rational> x(static_cast<std::size_t>(red.R.cols), Rational(0));
    for (int r = 0; r < red.rank; ++r)
        x[static_cast<std::size_t>(red.pivot_cols[static_cast<std::size_t>(r)])] = tb[static_cast<std::size_t>(r)];
    out.x = std::move(x);
    return out;
}

/// Nullspace basis vectors, one per free column, in free-column order.
inline std::vector<std::vector<Rational>> nullspace_basis(const RowReduction& red) {
    std::vector<std::vector<Rational>> basis;
    basis.reserve(red.free_cols.size());
    for (int fc : red.free_cols) {
        std::vector<Rational> v(static_cast<std::size_t>(red.R.cols), Rational(0));
        v[static_cast<std::size_t>(fc)] = 1;
        for (int r = 0; r < red.rank; ++r)
            v[static_cast<std::size_t>(red.pivot_cols[static_cast<std::size_t>(r)])] = -red.R.at(r, fc);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace nplectic
