#pragma once

// Lattices in Z^n: covolumes, the star product and the basis of S(Lambda),
// reduced bases by exact enumeration, the constant C(r, s), and exact counts
// of rank-r integral symmetric matrices in torus-skewed boxes.

#include <cstdint>
#include <string>
#include <vector>

#include "binform/linalg.hpp"
#include "binform/scalar.hpp"

namespace binform {

struct LatticeBasis {
    IntMatrix rows;  // r x n

    LatticeBasis() = default;
    explicit LatticeBasis(IntMatrix rows);  // rows must be independent
    int rank() const { return static_cast<int>(rows.rows()); }
    int ambient() const { return static_cast<int>(rows.cols()); }
    IntMatrix gram() const { return rows * rows.transpose(); }
    bool primitive() const { return is_primitive(rows); }
};

// v w^t + w v^t, or v w^t when v and w are dependent.
IntMatrix star(const IntVector& v, const IntVector& w);

// tr(X Y); the inner product on symmetric matrices used for d(S(Lambda)).
Integer frobenius(const IntMatrix& x, const IntMatrix& y);

// l_i * l_j for i <= j; NotPrimitive when they do not span every integral
// symmetric matrix with row space in Lambda (x) R.
std::vector<IntMatrix> s_lambda_basis(const LatticeBasis& lattice);

struct Covolume {
    Integer squared;  // Gram determinant
    double value = 0;
};
Covolume covolume(const LatticeBasis& lattice);
// Gram determinant of symmetric matrices under the Frobenius product.
Integer symmetric_covolume_squared(const std::vector<IntMatrix>& basis);

struct CovolumeIdentity {
    Integer lhs;  // d(S(Lambda))^2
    Integer rhs;  // 2^{r(r-1)/2} d(Lambda)^{2(r+1)}
    bool holds = false;
};
CovolumeIdentity covolume_identity_check(const LatticeBasis& lattice);

// Rows of an LLL-reduced basis (delta = 3/4) of the same lattice.
IntMatrix lll_reduce(const IntMatrix& rows);

// Coefficient vectors x with x G x^t <= bound, zero included. `nodes`
// accumulates the enumeration tree size; BudgetExceeded past `budget`.
std::vector<IntVector> short_vectors(const IntMatrix& gram, const Integer& bound, std::uint64_t budget,
                                     std::uint64_t* nodes = nullptr);

struct ReducedBasis {
    IntMatrix basis;  // rows ordered by length
    std::vector<Integer> squared_lengths;
    std::vector<Integer> minima_squared;  // successive minima, squared
    std::uint64_t nodes = 0;

    // prod |l_i| <= c d(Lambda), compared exactly in squares.
    bool almost_reduced(const Rational& c, const Integer& covolume_squared) const;
};

// Greedy Minkowski reduction: l_k is a shortest vector extending l_1..l_{k-1}
// to a basis. Ties break by the lexicographic order of the vectors, with
// the first nonzero entry made positive.
ReducedBasis reduced_basis(const LatticeBasis& lattice, std::uint64_t budget = 10000000);

// Number of lattice points with sup norm at most y, zero included.
std::uint64_t count_points_in_box(const LatticeBasis& lattice, const Integer& y, std::uint64_t budget = 10000000);

// s = diag(t_1^{-1}, ..., t_n^{-1}).
struct TorusScaling {
    std::vector<Rational> t;

    TorusScaling() = default;
    explicit TorusScaling(std::vector<Rational> t);  // entries positive
    static TorusScaling identity(int n);
    static TorusScaling parse(const std::string& text, int n);  // "4,2,1/8"
    int size() const { return static_cast<int>(t.size()); }
    bool determinant_one() const;
    bool sorted() const;  // t_1 >= ... >= t_n
    std::string str() const;
};

// prod_{i=1}^{r} prod_{j=1}^{n-i} t_j / t_{n-i+1}.
Rational C_constant(int r, const TorusScaling& s);
// prod_{i<j} t_j / t_i.
Rational delta(const TorusScaling& s);

struct CountOptions {
    std::uint64_t budget = std::uint64_t(1) << 34;  // matrices visited
    int threads = 1;
    bool brute_force = false;  // skip the fast paths
};

struct CountReport {
    int n = 0, r = 0;
    Rational Y;
    TorusScaling s;
    std::uint64_t count = 0;
    double bound = 0;  // C(r, s) Y^{nr/2} (1 + log max(Y, 1))^r
    double ratio = 0;
    std::string method;
};

// Integral symmetric n x n matrices of rank exactly r with
// |b_ij| <= Y / (t_i t_j), i.e. inside s(Y D) for D the unit sup-norm ball.
CountReport count_rank_r_symmetric(int n, int r, const Rational& Y, const TorusScaling& s,
                                   const CountOptions& options = {});

} // namespace binform
