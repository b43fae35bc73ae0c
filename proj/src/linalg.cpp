#include "binform/linalg.hpp"

namespace binform {

IntMatrix to_integer(const RatMatrix& m) {
    IntMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (denominator(m(i, j)) != 1) throw Error(ErrorKind::VerificationFailed, "non-integral entry");
            out(i, j) = numerator(m(i, j));
        }
    }
    return out;
}

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
    return out;
}

std::vector<Eigen::Index> rref(RatMatrix& m) {
    std::vector<Eigen::Index> pivots;
    Eigen::Index row = 0;
    for (Eigen::Index c = 0; c < m.cols() && row < m.rows(); ++c) {
        Eigen::Index p = row;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        m.row(row).swap(m.row(p));
        Rational inv = Rational(1) / m(row, c);
        m.row(row) *= inv;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, c) == 0) continue;
            Rational f = m(i, c);
            m.row(i) -= f * m.row(row);
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

IntMatrix nullspace(const IntMatrix& input) {
    RatMatrix m = to_rational(input);
    auto pivots = rref(m);
    const Eigen::Index n = input.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<IntVector> basis;
    for (Eigen::Index free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        RatVector v = RatVector::Zero(n);
        v(free) = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v(pivots[r]) = -m(r, free);
        Integer lcm = 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            Integer d = denominator(v(i));
            lcm = lcm / gcd(lcm, d) * d;
        }
        IntVector w(n);
        Integer g = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            w(i) = numerator(v(i) * Rational(lcm));
            g = gcd(g, w(i));
        }
        if (g > 1) w /= g;
        basis.push_back(w);
    }
    IntMatrix out(n, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = basis[k];
    return out;
}

ColumnHermite column_hermite(const IntMatrix& rows) {
    const Eigen::Index r = rows.rows(), n = rows.cols();
    IntMatrix m = rows;
    IntMatrix v = IntMatrix::Identity(n, n);
    IntMatrix w = IntMatrix::Identity(n, n);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (i >= n) throw Error(ErrorKind::ContractViolation, "more rows than columns");
        // Move a nonzero entry of row i into column i.
        if (m(i, i) == 0) {
            Eigen::Index j = i + 1;
            while (j < n && m(i, j) == 0) ++j;
            if (j == n) throw Error(ErrorKind::ContractViolation, "rows are linearly dependent");
            m.col(i).swap(m.col(j));
            v.col(i).swap(v.col(j));
            w.row(i).swap(w.row(j));
        }
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (m(i, j) == 0) continue;
            Integer a = m(i, i), b = m(i, j), s, t;
            Integer g = ext_gcd(a, b, s, t);
            Integer ag = a / g, bg = b / g;
            IntVector ci = m.col(i), cj = m.col(j);
            m.col(i) = s * ci + t * cj;
            m.col(j) = -bg * ci + ag * cj;
            ci = v.col(i);
            cj = v.col(j);
            v.col(i) = s * ci + t * cj;
            v.col(j) = -bg * ci + ag * cj;
            Eigen::Matrix<Integer, 1, Eigen::Dynamic> ri = w.row(i), rj = w.row(j);
            w.row(i) = ag * ri + bg * rj;
            w.row(j) = -t * ri + s * rj;
        }
        if (m(i, i) < 0) {
            m.col(i) = -m.col(i);
            v.col(i) = -v.col(i);
            w.row(i) = -w.row(i);
        }
    }
    return {m.leftCols(r), v, w};
}

bool is_primitive(const IntMatrix& rows) {
    if (rows.rows() == 0) return true;
    if (exact_rank(rows) != rows.rows()) return false;
    auto ch = column_hermite(rows);
    for (Eigen::Index i = 0; i < ch.h.rows(); ++i)
        if (ch.h(i, i) != 1) return false;
    return true;
}

IntMatrix saturate(const IntMatrix& rows) {
    if (exact_rank(rows) != rows.rows()) throw Error(ErrorKind::ContractViolation, "rows are linearly dependent");
    auto ch = column_hermite(rows);
    return ch.v_inv.topRows(rows.rows());
}

IntMatrix complete_to_unimodular(const IntMatrix& rows) {
    const Eigen::Index r = rows.rows(), n = rows.cols();
    if (!is_primitive(rows)) throw Error(ErrorKind::NotPrimitive, "lattice is not primitive");
    auto ch = column_hermite(rows);
    IntMatrix d = IntMatrix::Identity(n, n);
    d.topLeftCorner(r, r) = ch.h;
    IntMatrix u = d * ch.v_inv;
    if (r < n && bareiss_determinant(u) < 0) u.row(n - 1) = -u.row(n - 1);
    return u;
}

IntMatrix coordinates_in(const IntMatrix& rows, const IntMatrix& basis) {
    // Solve x * basis = rows through the normal equations.
    RatMatrix b = to_rational(basis);
    RatMatrix gram = b * b.transpose();
    RatMatrix rhs = to_rational(rows) * b.transpose();
    const Eigen::Index r = gram.rows();
    RatMatrix aug(r, r + rhs.rows());
    aug.leftCols(r) = gram;
    aug.rightCols(rhs.rows()) = rhs.transpose();
    auto pivots = rref(aug);
    if (static_cast<Eigen::Index>(pivots.size()) != r) throw Error(ErrorKind::ContractViolation, "basis is degenerate");
    RatMatrix x = aug.rightCols(rhs.rows()).transpose();
    if (x * b != to_rational(rows)) throw Error(ErrorKind::NotNested, "rows are not in the span of the basis");
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            if (denominator(x(i, j)) != 1) throw Error(ErrorKind::NotNested, "rows are not in the lattice");
    return to_integer(x);
}

IntMatrix complete_flag(const IntMatrix& inner, const IntMatrix& outer) {
    const Eigen::Index r = inner.rows(), rr = outer.rows(), n = outer.cols();
    IntMatrix u_outer = complete_to_unimodular(outer);
    if (!is_primitive(inner)) throw Error(ErrorKind::NotPrimitive, "inner lattice is not primitive");
    IntMatrix x = coordinates_in(inner, outer);
    IntMatrix w = complete_to_unimodular(x);
    IntMatrix u(n, n);
    u.topRows(rr) = w * outer;
    u.bottomRows(n - rr) = u_outer.bottomRows(n - rr);
    if (bareiss_determinant(u) < 0) {
        if (rr < n) u.row(n - 1) = -u.row(n - 1);
        else if (r < rr) u.row(rr - 1) = -u.row(rr - 1);
    }
    return u;
}

IntMatrix inverse_unimodular(const IntMatrix& u) {
    const Eigen::Index n = u.rows();
    RatMatrix aug(n, 2 * n);
    aug.leftCols(n) = to_rational(u);
    aug.rightCols(n) = RatMatrix::Identity(n, n);
    auto pivots = rref(aug);
    if (static_cast<Eigen::Index>(pivots.size()) != n || pivots.back() >= n)
        throw Error(ErrorKind::ContractViolation, "matrix is singular");
    return to_integer(aug.rightCols(n));
}

namespace modp {

Matrix reduce(const IntMatrix& m, std::int64_t p) {
    Matrix out(m.rows(), m.cols());
    Integer pp = p;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = static_cast<std::int64_t>(binform::mod(m(i, j), pp));
    return out;
}

namespace {

// Row reduction to reduced echelon form; returns pivot columns.
std::vector<Eigen::Index> echelon(Matrix& m, std::int64_t p, std::int64_t* det_sign_scale = nullptr) {
    std::vector<Eigen::Index> pivots;
    std::int64_t scale = 1;
    Eigen::Index row = 0;
    for (Eigen::Index c = 0; c < m.cols() && row < m.rows(); ++c) {
        Eigen::Index piv = row;
        while (piv < m.rows() && m(piv, c) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != row) {
            m.row(row).swap(m.row(piv));
            scale = mod(-scale, p);
        }
        std::int64_t pv = m(row, c);
        scale = scale * pv % p;
        std::int64_t inv = inv_mod(pv, p);
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(row, j) = m(row, j) * inv % p;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, c) == 0) continue;
            std::int64_t f = m(i, c);
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = mod(m(i, j) - f * m(row, j), p);
        }
        pivots.push_back(c);
        ++row;
    }
    if (det_sign_scale) *det_sign_scale = scale;
    return pivots;
}

} // namespace

std::int64_t determinant(Matrix m, std::int64_t p) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::ContractViolation, "determinant of non-square matrix");
    std::int64_t scale = 1;
    auto pivots = echelon(m, p, &scale);
    if (static_cast<Eigen::Index>(pivots.size()) < m.rows()) return 0;
    return scale;
}

Eigen::Index rank(Matrix m, std::int64_t p) { return static_cast<Eigen::Index>(echelon(m, p).size()); }

Matrix kernel(const Matrix& input, std::int64_t p) {
    Matrix m = input;
    auto pivots = echelon(m, p);
    const Eigen::Index n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    Matrix out(n, n - static_cast<Eigen::Index>(pivots.size()));
    Eigen::Index k = 0;
    for (Eigen::Index free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        out.col(k).setZero();
        out(free, k) = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) out(pivots[r], k) = mod(-m(r, free), p);
        ++k;
    }
    return out;
}

Matrix inverse(const Matrix& input, std::int64_t p) {
    const Eigen::Index n = input.rows();
    Matrix aug(n, 2 * n);
    aug.leftCols(n) = input;
    aug.rightCols(n) = Matrix::Identity(n, n);
    auto pivots = echelon(aug, p);
    if (static_cast<Eigen::Index>(pivots.size()) != n || pivots.back() >= n)
        throw Error(ErrorKind::ContractViolation, "matrix is singular mod p");
    return aug.rightCols(n);
}

Matrix multiply(const Matrix& a, const Matrix& b, std::int64_t p) {
    Matrix out = Matrix::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            std::int64_t s = 0;
            for (Eigen::Index k = 0; k < a.cols(); ++k) s = (s + a(i, k) * b(k, j)) % p;
            out(i, j) = mod(s, p);
        }
    return out;
}

Matrix complete_column(const VectorX<std::int64_t>& v, std::int64_t p) {
    const Eigen::Index n = v.size();
    Eigen::Index lead = 0;
    while (lead < n && v(lead) == 0) ++lead;
    if (lead == n) throw Error(ErrorKind::ContractViolation, "zero vector");
    Matrix out = Matrix::Zero(n, n);
    out.col(0) = v;
    // Remaining columns: standard basis vectors other than e_lead.
    Eigen::Index k = 1;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i == lead) continue;
        out(i, k++) = 1;
    }
    return out;
}

} // namespace modp

} // namespace binform
