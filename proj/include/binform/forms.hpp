#pragma once

// Integral binary n-ic forms: discriminant, the SL2 action, the associated
// rank-n ring, maximality and reduction tests.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "binform/factor.hpp"
#include "binform/scalar.hpp"

namespace binform {

// f(x, y) = a_0 x^n + a_1 x^{n-1} y + ... + a_n y^n.
class BinaryForm {
public:
    BinaryForm() = default;
    explicit BinaryForm(std::vector<Integer> coeffs);
    BinaryForm(std::initializer_list<long long> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Integer>& coeffs() const& { return coeffs_; }
    std::vector<Integer> coeffs() && { return std::move(coeffs_); }
    const Integer& operator[](std::size_t i) const { return coeffs_[i]; }
    bool is_zero() const;

    Integer operator()(const Integer& x, const Integer& y) const;

    // Text form "n:a0,a1,...,an".
    static BinaryForm parse(std::string_view text);
    std::string str() const;

    BinaryForm times_x() const;
    BinaryForm swapped() const;

    bool operator==(const BinaryForm& other) const { return coeffs_ == other.coeffs_; }
    bool operator!=(const BinaryForm& other) const { return !(*this == other); }

private:
    std::vector<Integer> coeffs_;
};

using Matrix2 = Eigen::Matrix<Integer, 2, 2>;

// Element of SL2(Z) acting on forms through f((x, y) * gamma).
class UnimodularMap {
public:
    UnimodularMap() : m_(Matrix2::Identity()) {}
    explicit UnimodularMap(const Matrix2& m);
    UnimodularMap(long long a, long long b, long long c, long long d);

    const Matrix2& matrix() const { return m_; }
    const Integer& operator()(int i, int j) const { return m_(i, j); }
    UnimodularMap inverse() const;
    UnimodularMap operator*(const UnimodularMap& other) const { return UnimodularMap(Matrix2(m_ * other.m_)); }
    bool is_identity() const { return m_ == Matrix2::Identity(); }

private:
    Matrix2 m_;
};

// act(g2, act(g1, f)) = act(g2 * g1, f).
BinaryForm act(const UnimodularMap& gamma, const BinaryForm& f);

Integer height(const BinaryForm& f);

// Normalized so that Delta(a_0 prod (x - r_i y)) = a_0^{2n-2} prod_{i<j} (r_i - r_j)^2.
Integer discriminant(const BinaryForm& f);

// Coefficients of f(x, t x + y).
template <typename S>
std::vector<S> shear_coeffs(const std::vector<S>& a, long long t) {
    const int n = static_cast<int>(a.size()) - 1;
    std::vector<S> out(a.size(), S(0));
    // (t x + y)^i contributes binom(i, k) t^{i-k} to x^{n-k} y^k.
    for (int i = 0; i <= n; ++i) {
        if (a[i] == 0) continue;
        S binom(1), tp(1);
        // k runs downward from i so that t^{i-k} grows.
        std::vector<S> row(i + 1);
        for (int k = 0; k <= i; ++k) {
            row[k] = binom;
            binom = binom * S(i - k) / S(k + 1);
        }
        for (int k = i; k >= 0; --k) {
            out[k] += a[i] * row[k] * tp;
            tp *= S(t);
        }
    }
    return out;
}

// Sylvester-resultant discriminant over an exact ring S (machine or
// multiprecision integers). Handles a_0 = 0 by a shear.
template <typename S>
S discriminant_of(std::vector<S> a) {
    const int n = static_cast<int>(a.size()) - 1;
    if (n < 1) throw Error(ErrorKind::ContractViolation, "degree must be at least 1");
    if (a[0] == 0) {
        bool zero = true;
        for (const auto& c : a) zero = zero && c == 0;
        if (zero) return S(0);
        long long t = 1;
        while (true) {
            // leading coefficient of f(x, t x + y) is f(1, t)
            S lead(0), tp(1);
            for (int i = 0; i <= n; ++i) {
                lead += a[i] * tp;
                tp *= S(t);
            }
            if (lead != 0) break;
            ++t;
        }
        a = shear_coeffs(a, t);
    }
    if (n == 1) return S(1);
    // F(x) = sum a_i x^{n-i}; rows of F (n-1 of them) then rows of F'.
    const int size = 2 * n - 1;
    std::vector<S> m(static_cast<std::size_t>(size * size), S(0));
    auto at = [&](int i, int j) -> S& { return m[static_cast<std::size_t>(i * size + j)]; };
    for (int r = 0; r < n - 1; ++r)
        for (int i = 0; i <= n; ++i) at(r, r + i) = a[i];
    for (int r = 0; r < n; ++r)
        for (int i = 0; i < n; ++i) at(n - 1 + r, r + i) = a[i] * S(n - i);
    S prev(1);
    bool negate = false;
    for (int k = 0; k + 1 < size; ++k) {
        if (at(k, k) == 0) {
            int pivot = k + 1;
            while (pivot < size && at(pivot, k) == 0) ++pivot;
            if (pivot == size) return S(0);
            for (int j = 0; j < size; ++j) std::swap(at(k, j), at(pivot, j));
            negate = !negate;
        }
        for (int i = k + 1; i < size; ++i)
            for (int j = k + 1; j < size; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
        prev = at(k, k);
    }
    S res = at(size - 1, size - 1);
    if (negate) res = -res;
    S disc = res / a[0];
    if ((n * (n - 1) / 2) % 2 == 1) disc = -disc;
    return disc;
}

// Closed forms used by the enumeration kernels.
template <typename S>
S discriminant_quadratic(S a, S b, S c) {
    return b * b - 4 * a * c;
}

template <typename S>
S discriminant_cubic(S a, S b, S c, S d) {
    return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
}

// Multiplication table of R_f on the basis zeta_0 = 1,
// zeta_k = a_0 theta^k + a_1 theta^{k-1} + ... + a_{k-1} theta.
struct RankNRing {
    int rank = 0;
    std::vector<IntMatrix> table;  // table[i](j, k): coefficient of zeta_k in zeta_i * zeta_j
    Integer disc;

    IntVector multiply(const IntVector& x, const IntVector& y) const;
    Integer trace(const IntVector& x) const;
    IntMatrix trace_gram() const;
};

RankNRing ring_of(const BinaryForm& f);

// Maximality of R_f (x) Z_p; depends only on f mod p^2.
bool is_maximal_at_p(const BinaryForm& f, std::uint64_t p);

// The same test on residues a_i in [0, p^2); requires p < 2^31.
bool maximal_at_p_residue(const std::vector<std::int64_t>& residues, std::int64_t p);

Tristate is_maximal(const BinaryForm& f, const FactorBudget& budget = {});

enum class Reduction { yes, no, uncertain };
const char* to_string(Reduction r);

struct ReductionReport {
    Reduction verdict = Reduction::uncertain;
    int digits_used = 0;
};

// Whether {1, zeta_1, ..., zeta_{n-1}} is the unique Minkowski-reduced basis
// of R_f in its Minkowski embedding. Precision is in decimal digits and is
// doubled up to max_digits before giving up.
ReductionReport is_strongly_minkowski_reduced(const BinaryForm& f, int digits = 50, int max_digits = 200);

struct SnCertificate {
    bool certified = false;
    std::vector<std::pair<std::uint64_t, std::vector<int>>> witnesses;
};

SnCertificate certify_sn_galois(const BinaryForm& f, int prime_budget);

} // namespace binform
