#pragma once

// Pairs of integral symmetric matrices (A, B): the invariant binary form,
// the Q- and q-invariants on the block-zero subspaces W0 and W1, the sigma_m
// lifts, and the Q = 0 normal form over F_p.

#include <cstdint>
#include <string>
#include <vector>

#include "binform/forms.hpp"
#include "binform/linalg.hpp"
#include "binform/scalar.hpp"

namespace binform {

struct SymmetricPencil {
    IntMatrix A, B;

    SymmetricPencil() = default;
    SymmetricPencil(IntMatrix a, IntMatrix b);  // checks shape and symmetry
    int size() const { return static_cast<int>(A.rows()); }

    // (u A u^t, u B u^t); rows of u are the new basis vectors.
    SymmetricPencil transformed(const IntMatrix& u) const;
    // (a A - b B, -c A + d B) for t = [[a, b], [c, d]]; the invariant form
    // becomes f_{A,B}((x, y) t).
    SymmetricPencil mixed(const Matrix2& t) const;
    SymmetricPencil reduced(std::int64_t p) const;

    bool operator==(const SymmetricPencil& o) const { return A == o.A && B == o.B; }
};

// Pencil of odd size n = 2g+1 whose top-left g x g blocks vanish.
struct W0Element {
    SymmetricPencil pencil;
    int g = 0;

    W0Element() = default;
    explicit W0Element(SymmetricPencil p);  // g from the size; validates
    IntMatrix A_top() const { return pencil.A.block(0, g, g, g + 1); }
    IntMatrix B_top() const { return pencil.B.block(0, g, g, g + 1); }
};

// Pencil of size 2g+3 (for even n = 2g+2) with the A block (g+1)^2 and the
// B block (g+2)^2 zero, and a one-dimensional kernel of B that is not
// isotropic for A.
struct W1Element {
    SymmetricPencil pencil;
    int g = 0;

    W1Element() = default;
    explicit W1Element(SymmetricPencil p);  // validates all three conditions
    IntMatrix A_top() const { return pencil.A.block(0, g + 1, g + 1, g + 2); }
    IntMatrix B_top() const { return pencil.B.block(0, g + 1, g + 1, g + 2); }
    // Top-right (g+1) x (g+1) block of B.
    IntMatrix B_prime() const { return pencil.B.block(0, g + 2, g + 1, g + 1); }
    IntVector kernel() const;
};

// Block lower-triangular element of G0 (blocks g, g+1) or G1 (blocks g+1,
// 1, g+1) with determinant +-1.
struct BlockUnimodular {
    enum class Shape { G0, G1 };
    Shape shape = Shape::G0;
    int g = 0;
    IntMatrix matrix;

    BlockUnimodular(Shape s, int g, IntMatrix m);  // validates
    Integer det_gamma1() const;
    Integer gamma2() const;  // G1 only: the 1 x 1 middle block
    Integer det_gamma2() const;  // G0 only
};

// Data of the odd lift: f((x, y) gamma) = m^2 b_0 x^n + m b_1 x^{n-1} y + ...
struct LiftRecipe {
    std::int64_t m = 1;
    UnimodularMap gamma;
    std::vector<Integer> b;
    Integer r = 0;
    std::vector<Integer> c;
};

// Coefficients of det(M x - N y) for square M, N (x^k first), by
// evaluation at x = 0..k, y = 1 and exact Newton interpolation.
std::vector<Integer> pencil_determinant(const IntMatrix& M, const IntMatrix& N);
// Same by fraction-free elimination over Z[x]; the cross-check.
std::vector<Integer> pencil_determinant_fraction_free(const IntMatrix& M, const IntMatrix& N);

// (-1)^{N(N-1)/2} det(A x - B y).
BinaryForm invariant_form(const SymmetricPencil& P);

// Determinant of the coefficient matrix of the signed maximal minors of
// A_top x - B_top y, for g x (g+1) inputs.
Integer Q_top(const IntMatrix& A_top, const IntMatrix& B_top);
Integer Q_of_W0(const W0Element& w);

// |Q| after completing a primitive rank-g lattice (rows) isotropic for A
// and B to a basis of Z^n.
Integer Q_with_lattice(const SymmetricPencil& P, const IntMatrix& lattice);

Integer q_of_W1(const W1Element& w);
// |q| for a flag lattice (rank g+1, isotropic for A and B) inside outer
// (rank g+2, isotropic for B).
Integer q_with_lattices(const SymmetricPencil& P, const IntMatrix& lattice, const IntMatrix& outer);

LiftRecipe weak_normal_form(const BinaryForm& f, std::int64_t m);

W0Element sigma_m_odd(const BinaryForm& f, std::int64_t m, LiftRecipe* recipe = nullptr);
W1Element sigma_m_even(const BinaryForm& f, std::int64_t m);

// Invariants of the two flags of a W1 element coming from an even lift:
// the standard one and its reflection across the A-orthogonal complement
// of ker B.
struct FlagInvariants {
    Integer Q_standard, q_standard;
    Integer Q_reflected, q_reflected;
    IntMatrix reflected_lattice, reflected_outer;
};
FlagInvariants flag_invariants(const W1Element& w);

struct QZeroNormalForm {
    std::int64_t p = 0;
    Matrix2 sl2;          // entries in [0, p), determinant 1 mod p
    IntMatrix g0;         // block lower-triangular, determinant 1 mod p
    W0Element normal;     // entries in [0, p)
    std::vector<std::int64_t> a_units, b_units;  // a_1..a_g, b_2..b_g
};

// Whether the top-right blocks already have the Q = 0 normal shape mod p.
bool has_q_zero_shape(const W0Element& w, std::int64_t p);

// Apply (sl2, g0) to w mod p, in that order.
W0Element apply_mod_p(const W0Element& w, const Matrix2& sl2, const IntMatrix& g0, std::int64_t p);

// Requires Q(w) = 0 mod p and f_{A,B} mod p outside the locus Y.
QZeroNormalForm normalize_Q_zero(const W0Element& w, std::int64_t p);

struct DivisibilityReport {
    Integer disc, Q, gram_A, gram_B;
    bool q_squared_divides = false;
    bool gram_divides = false;
    bool ok() const { return q_squared_divides && gram_divides; }
};
DivisibilityReport check_divisibility_laws(const W0Element& w);

struct VanishingReport {
    int block_zero_k = 0;          // smallest k with the block condition, 0 if none
    int kernel_dim = 0;            // dim ker B over Q
    bool kernel_isotropic = false; // some nonzero kernel vector of B is A-isotropic
    bool any() const { return block_zero_k > 0 || kernel_dim >= 2 || kernel_isotropic; }
};
VanishingReport disc_vanishing_predicates(const SymmetricPencil& P);

} // namespace binform
