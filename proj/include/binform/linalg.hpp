#pragma once

// Exact dense linear algebra over Z, Q and F_p.

#include <utility>
#include <vector>

#include "binform/scalar.hpp"

namespace binform {

// Fraction-free (Bareiss) determinant. Every intermediate value is a minor
// of the input, so the divisions are exact over an integral domain.
template <typename Derived>
typename Derived::Scalar bareiss_determinant(const Eigen::MatrixBase<Derived>& input) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = input.rows();
    if (input.cols() != n) throw Error(ErrorKind::ContractViolation, "determinant of non-square matrix");
    if (n == 0) return Scalar(1);
    MatrixX<Scalar> m = input;
    Scalar prev(1);
    bool negate = false;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            Eigen::Index pivot = k + 1;
            while (pivot < n && m(pivot, k) == 0) ++pivot;
            if (pivot == n) return Scalar(0);
            m.row(k).swap(m.row(pivot));
            negate = !negate;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            for (Eigen::Index j = k + 1; j < n; ++j) {
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
            }
        }
        prev = m(k, k);
    }
    Scalar det = m(n - 1, n - 1);
    return negate ? Scalar(-det) : det;
}

// Rank by fraction-free row reduction.
template <typename Derived>
Eigen::Index exact_rank(const Eigen::MatrixBase<Derived>& input) {
    using Scalar = typename Derived::Scalar;
    MatrixX<Scalar> m = input;
    const Eigen::Index rows = m.rows(), cols = m.cols();
    Eigen::Index rank = 0;
    Scalar prev(1);
    for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
        Eigen::Index pivot = rank;
        while (pivot < rows && m(pivot, c) == 0) ++pivot;
        if (pivot == rows) continue;
        m.row(rank).swap(m.row(pivot));
        for (Eigen::Index i = rank + 1; i < rows; ++i) {
            for (Eigen::Index j = c + 1; j < cols; ++j) {
                m(i, j) = (m(i, j) * m(rank, c) - m(i, c) * m(rank, j)) / prev;
            }
            m(i, c) = 0;
        }
        prev = m(rank, c);
        ++rank;
    }
    return rank;
}

IntMatrix to_integer(const RatMatrix& m);
RatMatrix to_rational(const IntMatrix& m);

// Reduced row echelon form in place; returns the pivot columns.
std::vector<Eigen::Index> rref(RatMatrix& m);

// Integer basis (as columns) of the rational right kernel.
IntMatrix nullspace(const IntMatrix& m);

// Result of column Hermite reduction of a full-row-rank r x n matrix L:
// L * v = [h | 0] with v unimodular and h lower triangular with positive
// diagonal; v_inv is the inverse of v.
struct ColumnHermite {
    IntMatrix h;
    IntMatrix v;
    IntMatrix v_inv;
};
ColumnHermite column_hermite(const IntMatrix& rows);

// True when the rows span a primitive sublattice (saturated in Z^n).
bool is_primitive(const IntMatrix& rows);

// Basis of (row space over Q) intersected with Z^n.
IntMatrix saturate(const IntMatrix& rows);

// Unimodular n x n matrix whose first r rows are the given primitive rows,
// with determinant +1 whenever r < n. Throws NotPrimitive otherwise.
IntMatrix complete_to_unimodular(const IntMatrix& rows);

// Completion adapted to a flag: the first r rows span `inner`, the first
// r' rows span `outer`. Requires inner inside outer, both primitive.
IntMatrix complete_flag(const IntMatrix& inner, const IntMatrix& outer);

// Integer coordinates x with x * basis = rows; throws NotNested otherwise.
IntMatrix coordinates_in(const IntMatrix& rows, const IntMatrix& basis);

IntMatrix inverse_unimodular(const IntMatrix& u);

// Linear algebra over F_p with entries in [0, p).
namespace modp {

using Matrix = I64Matrix;

Matrix reduce(const IntMatrix& m, std::int64_t p);
std::int64_t determinant(Matrix m, std::int64_t p);
Eigen::Index rank(Matrix m, std::int64_t p);
// Basis of the right kernel as columns.
Matrix kernel(const Matrix& m, std::int64_t p);
Matrix inverse(const Matrix& m, std::int64_t p);
Matrix multiply(const Matrix& a, const Matrix& b, std::int64_t p);
// Invertible matrix whose first column is the nonzero vector v.
Matrix complete_column(const VectorX<std::int64_t>& v, std::int64_t p);

} // namespace modp

} // namespace binform
