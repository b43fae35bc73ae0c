#include "binform/pencils.hpp"

#include <algorithm>

#include "binform/localdens.hpp"
#include "binform/poly.hpp"

namespace binform {

namespace {

bool is_symmetric(const IntMatrix& m) { return m.rows() == m.cols() && m == m.transpose(); }

IntMatrix to_int(const I64Matrix& m) {
    IntMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

IntMatrix reduce_int(const IntMatrix& m, std::int64_t p) { return to_int(modp::reduce(m, p)); }

// Polynomials over Z, low degree first.
using ZPoly = std::vector<Integer>;

void ztrim(ZPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly out(a.size() + b.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    ztrim(out);
    return out;
}

ZPoly zsub(const ZPoly& a, const ZPoly& b) {
    ZPoly out(std::max(a.size(), b.size()), Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    ztrim(out);
    return out;
}

ZPoly zdiv_exact(ZPoly a, const ZPoly& b) {
    if (b.empty()) throw Error(ErrorKind::ContractViolation, "division by the zero polynomial");
    if (a.empty()) return {};
    if (a.size() < b.size()) throw Error(ErrorKind::VerificationFailed, "inexact polynomial division");
    ZPoly q(a.size() - b.size() + 1, Integer(0));
    for (std::size_t k = q.size(); k-- > 0;) {
        const Integer& top = a[k + b.size() - 1];
        if (top % b.back() != 0) throw Error(ErrorKind::VerificationFailed, "inexact polynomial division");
        q[k] = top / b.back();
        for (std::size_t j = 0; j < b.size(); ++j) a[k + j] -= q[k] * b[j];
    }
    ztrim(a);
    if (!a.empty()) throw Error(ErrorKind::VerificationFailed, "inexact polynomial division");
    ztrim(q);
    return q;
}

void check_square_pair(const IntMatrix& M, const IntMatrix& N) {
    if (M.rows() != M.cols() || N.rows() != M.rows() || N.cols() != M.cols())
        throw Error(ErrorKind::ContractViolation, "pencil matrices must be square of equal size");
}

IntMatrix unit_rows(int count, int n) {
    IntMatrix out = IntMatrix::Zero(count, n);
    for (int i = 0; i < count; ++i) out(i, i) = 1;
    return out;
}

std::vector<std::int64_t> factor_small_odd_squarefree(std::int64_t m) {
    if (m < 1 || m % 2 == 0) throw Error(ErrorKind::ContractViolation, "m must be odd and positive");
    std::vector<std::int64_t> primes;
    std::int64_t rest = m;
    for (std::int64_t p = 3; p * p <= rest; p += 2) {
        if (rest % p) continue;
        rest /= p;
        if (rest % p == 0) throw Error(ErrorKind::ContractViolation, "m must be squarefree");
        primes.push_back(p);
    }
    if (rest > 1) primes.push_back(rest);
    return primes;
}

// Root multiplicity of f at the point v of P^1(F_p).
int multiplicity_at(const std::vector<std::int64_t>& a, std::int64_t p, std::int64_t vx, std::int64_t vy) {
    const int n = static_cast<int>(a.size()) - 1;
    if (vx == 0) {
        // root (0 : 1): x divides f; count trailing zero coefficients
        int k = 0;
        while (k <= n && mod(a[n - k], p) == 0) ++k;
        return k;
    }
    // f(1, t) with t = vy / vx
    std::int64_t t = mod(vy * inv_mod(vx, p), p);
    fp::Poly poly(a.begin(), a.end());
    poly = fp::reduce(poly, p);
    if (poly.empty()) return n + 1;
    fp::Poly lin{mod(-t, p), 1};
    int k = 0;
    while (true) {
        auto [q, r] = fp::divrem(poly, lin, p);
        if (!r.empty()) break;
        poly = q;
        ++k;
    }
    return k;
}

Integer eval_form(const BinaryForm& f, const Integer& x, const Integer& y) { return f(x, y); }

} // namespace

SymmetricPencil::SymmetricPencil(IntMatrix a, IntMatrix b) : A(std::move(a)), B(std::move(b)) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw Error(ErrorKind::ContractViolation, "A and B differ in size");
    if (!is_symmetric(A) || !is_symmetric(B)) throw Error(ErrorKind::ContractViolation, "pencil matrices must be symmetric");
}

SymmetricPencil SymmetricPencil::transformed(const IntMatrix& u) const {
    if (u.rows() != A.rows() || u.cols() != A.rows()) throw Error(ErrorKind::ContractViolation, "transform has the wrong size");
    return SymmetricPencil(IntMatrix(u * A * u.transpose()), IntMatrix(u * B * u.transpose()));
}

SymmetricPencil SymmetricPencil::mixed(const Matrix2& t) const {
    IntMatrix a = A * t(0, 0) - B * t(0, 1);
    IntMatrix b = B * t(1, 1) - A * t(1, 0);
    return SymmetricPencil(std::move(a), std::move(b));
}

SymmetricPencil SymmetricPencil::reduced(std::int64_t p) const {
    return SymmetricPencil(reduce_int(A, p), reduce_int(B, p));
}

W0Element::W0Element(SymmetricPencil p) : pencil(std::move(p)) {
    const int n = pencil.size();
    if (n < 3 || n % 2 == 0) throw Error(ErrorKind::ContractViolation, "W0 needs odd size at least 3");
    g = (n - 1) / 2;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            if (pencil.A(i, j) != 0 || pencil.B(i, j) != 0)
                throw Error(ErrorKind::ContractViolation, "top-left g x g blocks must vanish");
}

W1Element::W1Element(SymmetricPencil p) : pencil(std::move(p)) {
    const int n = pencil.size();
    if (n < 5 || n % 2 == 0) throw Error(ErrorKind::ContractViolation, "W1 needs odd size at least 5");
    g = (n - 3) / 2;
    for (int i = 0; i < g + 2; ++i) {
        for (int j = 0; j < g + 2; ++j) {
            if (i < g + 1 && j < g + 1 && pencil.A(i, j) != 0)
                throw Error(ErrorKind::ContractViolation, "top-left (g+1) block of A must vanish");
            if (pencil.B(i, j) != 0) throw Error(ErrorKind::ContractViolation, "top-left (g+2) block of B must vanish");
        }
    }
    IntMatrix ker = nullspace(pencil.B);
    if (ker.cols() != 1) throw Error(ErrorKind::ContractViolation, "kernel of B must be one-dimensional");
    IntVector v = ker.col(0);
    if ((v.transpose() * pencil.A * v)(0, 0) == 0)
        throw Error(ErrorKind::ContractViolation, "kernel of B is isotropic for A");
}

IntVector W1Element::kernel() const { return nullspace(pencil.B).col(0); }

BlockUnimodular::BlockUnimodular(Shape s, int g_, IntMatrix m) : shape(s), g(g_), matrix(std::move(m)) {
    const int n = static_cast<int>(matrix.rows());
    const int expected = s == Shape::G0 ? 2 * g + 1 : 2 * g + 3;
    if (g < 1 || matrix.cols() != n || n != expected) throw Error(ErrorKind::ContractViolation, "block matrix has the wrong size");
    // block boundaries
    std::vector<int> starts = s == Shape::G0 ? std::vector<int>{0, g, n} : std::vector<int>{0, g + 1, g + 2, n};
    for (std::size_t b = 0; b + 1 < starts.size(); ++b)
        for (int i = starts[b]; i < starts[b + 1]; ++i)
            for (int j = starts[b + 1]; j < n; ++j)
                if (matrix(i, j) != 0) throw Error(ErrorKind::ContractViolation, "block matrix is not lower block-triangular");
    Integer d = bareiss_determinant(matrix);
    if (d != 1 && d != -1) throw Error(ErrorKind::ContractViolation, "block matrix is not unimodular");
}

Integer BlockUnimodular::det_gamma1() const {
    const int k = shape == Shape::G0 ? g : g + 1;
    return bareiss_determinant(matrix.topLeftCorner(k, k));
}

Integer BlockUnimodular::gamma2() const {
    if (shape != Shape::G1) throw Error(ErrorKind::ContractViolation, "gamma2 is a scalar only for G1");
    return matrix(g + 1, g + 1);
}

Integer BlockUnimodular::det_gamma2() const {
    if (shape != Shape::G0) throw Error(ErrorKind::ContractViolation, "det_gamma2 is defined for G0");
    return bareiss_determinant(matrix.bottomRightCorner(g + 1, g + 1));
}

std::vector<Integer> pencil_determinant(const IntMatrix& M, const IntMatrix& N) {
    check_square_pair(M, N);
    const int k = static_cast<int>(M.rows());
    if (k == 0) return {Integer(1)};
    // values at x = 0..k, then forward differences
    std::vector<Integer> diff(k + 1);
    for (int x = 0; x <= k; ++x) diff[x] = bareiss_determinant(IntMatrix(M * Integer(x) - N));
    // Newton coefficients d_j = Delta^j P(0) / j!, integral for integer P
    std::vector<Integer> newton(k + 1);
    Integer fact = 1;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) fact *= j;
        if (diff[0] % fact != 0) throw Error(ErrorKind::VerificationFailed, "interpolation is not integral");
        newton[j] = diff[0] / fact;
        for (int i = 0; i + 1 < static_cast<int>(diff.size()); ++i) diff[i] = diff[i + 1] - diff[i];
        diff.pop_back();
    }
    // expand sum d_j x(x-1)...(x-j+1), low degree first
    ZPoly total(k + 1, Integer(0)), falling{Integer(1)};
    for (int j = 0; j <= k; ++j) {
        for (std::size_t i = 0; i < falling.size(); ++i) total[i] += newton[j] * falling[i];
        falling = zmul(falling, ZPoly{Integer(-j), Integer(1)});
    }
    std::vector<Integer> out(k + 1);
    for (int i = 0; i <= k; ++i) out[i] = total[k - i];
    return out;
}

std::vector<Integer> pencil_determinant_fraction_free(const IntMatrix& M, const IntMatrix& N) {
    check_square_pair(M, N);
    const int k = static_cast<int>(M.rows());
    std::vector<Integer> out(k + 1, Integer(0));
    if (k == 0) {
        out[0] = 1;
        return out;
    }
    std::vector<std::vector<ZPoly>> m(k, std::vector<ZPoly>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            m[i][j] = ZPoly{Integer(-N(i, j)), M(i, j)};
            ztrim(m[i][j]);
        }
    ZPoly prev{Integer(1)};
    bool negate = false;
    for (int c = 0; c + 1 < k; ++c) {
        if (m[c][c].empty()) {
            int pivot = c + 1;
            while (pivot < k && m[pivot][c].empty()) ++pivot;
            if (pivot == k) return out;
            std::swap(m[c], m[pivot]);
            negate = !negate;
        }
        for (int i = c + 1; i < k; ++i) {
            for (int j = c + 1; j < k; ++j)
                m[i][j] = zdiv_exact(zsub(zmul(m[i][j], m[c][c]), zmul(m[i][c], m[c][j])), prev);
            m[i][c].clear();
        }
        prev = m[c][c];
    }
    ZPoly det = m[k - 1][k - 1];
    for (std::size_t i = 0; i < det.size(); ++i) out[k - i] = negate ? Integer(-det[i]) : det[i];
    return out;
}

BinaryForm invariant_form(const SymmetricPencil& P) {
    const int n = P.size();
    if (n < 1) throw Error(ErrorKind::ContractViolation, "empty pencil");
    auto coeffs = pencil_determinant(P.A, P.B);
    if ((n * (n - 1) / 2) % 2 == 1)
        for (auto& c : coeffs) c = -c;
    return BinaryForm(std::move(coeffs));
}

Integer Q_top(const IntMatrix& A_top, const IntMatrix& B_top) {
    const Eigen::Index g = A_top.rows();
    if (g < 1 || A_top.cols() != g + 1 || B_top.rows() != g || B_top.cols() != g + 1)
        throw Error(ErrorKind::ContractViolation, "top blocks must be g x (g+1)");
    IntMatrix C(g + 1, g + 1);
    for (Eigen::Index i = 0; i <= g; ++i) {
        IntMatrix Ai(g, g), Bi(g, g);
        for (Eigen::Index j = 0, col = 0; j <= g; ++j) {
            if (j == i) continue;
            Ai.col(col) = A_top.col(j);
            Bi.col(col) = B_top.col(j);
            ++col;
        }
        auto fi = pencil_determinant(Ai, Bi);
        for (Eigen::Index j = 0; j <= g; ++j) C(i, j) = i % 2 == 0 ? fi[j] : Integer(-fi[j]);
    }
    return bareiss_determinant(C);
}

Integer Q_of_W0(const W0Element& w) { return Q_top(w.A_top(), w.B_top()); }

Integer Q_with_lattice(const SymmetricPencil& P, const IntMatrix& lattice) {
    const int n = P.size();
    if (n < 3 || n % 2 == 0) throw Error(ErrorKind::ContractViolation, "Q needs odd size at least 3");
    const int g = (n - 1) / 2;
    if (lattice.rows() != g || lattice.cols() != n) throw Error(ErrorKind::ContractViolation, "lattice must have rank g");
    if (!(lattice * P.A * lattice.transpose()).isZero() || !(lattice * P.B * lattice.transpose()).isZero())
        throw Error(ErrorKind::NotIsotropic, "lattice is not isotropic for A and B");
    IntMatrix u = complete_to_unimodular(lattice);
    return abs(Q_of_W0(W0Element(P.transformed(u))));
}

Integer q_of_W1(const W1Element& w) {
    Integer Q = Q_top(w.A_top(), w.B_top());
    Integer d = bareiss_determinant(w.B_prime());
    if (d == 0 || Q % d != 0) throw Error(ErrorKind::NonIntegralQuotient, "det(B') does not divide Q");
    return Q / d;
}

Integer q_with_lattices(const SymmetricPencil& P, const IntMatrix& lattice, const IntMatrix& outer) {
    const int n = P.size();
    if (n < 5 || n % 2 == 0) throw Error(ErrorKind::ContractViolation, "q needs odd size at least 5");
    const int g = (n - 3) / 2;
    if (lattice.rows() != g + 1 || outer.rows() != g + 2 || lattice.cols() != n || outer.cols() != n)
        throw Error(ErrorKind::ContractViolation, "flag lattices must have ranks g+1 and g+2");
    if (!(lattice * P.A * lattice.transpose()).isZero() || !(lattice * P.B * lattice.transpose()).isZero())
        throw Error(ErrorKind::NotIsotropic, "inner lattice is not isotropic for A and B");
    if (!(outer * P.B * outer.transpose()).isZero())
        throw Error(ErrorKind::NotIsotropic, "outer lattice is not isotropic for B");
    IntMatrix u = complete_flag(lattice, outer);
    return abs(q_of_W1(W1Element(P.transformed(u))));
}

LiftRecipe weak_normal_form(const BinaryForm& f, std::int64_t m) {
    LiftRecipe recipe;
    recipe.m = m;
    auto primes = factor_small_odd_squarefree(m);
    const int n = f.degree();
    if (primes.empty()) {
        recipe.b = f.coeffs();
        return recipe;
    }
    Integer M = m, M2 = M * M;
    Integer X = 0, Y = 0, modulus = 1;
    for (std::int64_t p : primes) {
        const std::int64_t q = p * p;
        if (p >= (1 << 20)) throw Error(ErrorKind::ContractViolation, "prime factor of m too large");
        std::vector<std::int64_t> res;
        for (const auto& c : f.coeffs()) res.push_back(static_cast<std::int64_t>(mod(c, Integer(q))));
        if (classify_residues(res, p) != DiscClass::WeakP2)
            throw Error(ErrorKind::NotWeaklyDivisible, "class at " + std::to_string(p) + " is not WeakP2");
        std::vector<std::pair<std::int64_t, std::int64_t>> roots;
        if (multiplicity_at(res, p, 0, 1) == 2) roots.emplace_back(0, 1);
        for (std::int64_t t = 0; t < p; ++t)
            if (multiplicity_at(res, p, 1, t) == 2) roots.emplace_back(1, t);
        if (roots.size() != 1)
            throw Error(ErrorKind::NotWeaklyDivisible,
                        std::to_string(roots.size()) + " double roots mod " + std::to_string(p));
        // f(v + p u) mod p^3 depends on u; pick the first u with exact p^2.
        Integer P = p, P2 = P * P, P3 = P2 * P;
        bool found = false;
        Integer wx, wy;
        for (std::int64_t u = 0; u < q && !found; ++u) {
            wx = roots[0].first + P * (u / p);
            wy = roots[0].second + P * (u % p);
            Integer value = eval_form(f, wx, wy);
            if (value % P2 == 0 && value % P3 != 0) found = true;
        }
        if (!found) throw Error(ErrorKind::NotWeaklyDivisible, "no lift with exact p^2 at " + std::to_string(p));
        // CRT into (X, Y) mod modulus * p^2
        Integer s, t;
        ext_gcd(modulus, P2, s, t);
        X = mod(X + modulus * s * (wx - X), modulus * P2);
        Y = mod(Y + modulus * s * (wy - Y), modulus * P2);
        modulus *= P2;
    }
    Integer d = gcd(X, Y);
    X /= d;
    Y /= d;
    Integer s, t;
    ext_gcd(X, Y, s, t);
    Matrix2 g;
    g << X, Y, Integer(-t), s;
    recipe.gamma = UnimodularMap(g);
    BinaryForm h = act(recipe.gamma, f);
    if (h[0] % M2 != 0 || h[1] % M != 0) throw Error(ErrorKind::VerificationFailed, "lift is not in weak normal form");
    recipe.b = h.coeffs();
    recipe.b[0] /= M2;
    recipe.b[1] /= M;
    if (gcd(recipe.b[0], M) != 1) throw Error(ErrorKind::VerificationFailed, "b_0 is not coprime to m");
    (void)n;
    return recipe;
}

namespace {

// The displayed odd lift before the SL2 change of variables.
SymmetricPencil build_odd_lift(int n, const Integer& m, const Integer& r, const std::vector<Integer>& c) {
    const int g = (n - 1) / 2;
    IntMatrix A = IntMatrix::Zero(n, n), B = IntMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) A(i, n - 1 - i) = 1;
    A(g - 1, g + 1) = A(g + 1, g - 1) = m;
    A(g, g) = c[0];
    for (int k = 1; k <= g; ++k) A(g + k, g + k) = c[2 * k];
    for (int i = 0; i + 1 < n; ++i) B(i, n - 2 - i) = 1;
    B(g - 1, g + 1) = B(g + 1, g - 1) = r;
    for (int k = 0; k <= g; ++k) B(g + k, g + k) = c[2 * k + 1];
    return SymmetricPencil(std::move(A), std::move(B));
}

// Solve a * x = b exactly; the triangular solve relies on this.
Integer exact_solve(const Integer& a, const Integer& b, const char* what) {
    if (a == 0 || b % a != 0) throw Error(ErrorKind::VerificationFailed, what);
    return b / a;
}

} // namespace

W0Element sigma_m_odd(const BinaryForm& f, std::int64_t m, LiftRecipe* recipe_out) {
    const int n = f.degree();
    if (n < 3 || n % 2 == 0) throw Error(ErrorKind::ContractViolation, "sigma_m (odd) needs odd degree at least 3");
    LiftRecipe recipe = weak_normal_form(f, m);
    const Integer M = m;
    BinaryForm target = act(recipe.gamma, f);
    std::vector<Integer> c(n + 1, Integer(0));
    Integer r = 0;
    auto coeff = [&](int i) { return invariant_form(build_odd_lift(n, M, r, c))[i]; };
    auto slope = [&](Integer& slot, int i) {
        Integer saved = slot;
        slot = 0;
        Integer base = coeff(i);
        slot = 1;
        Integer step = coeff(i) - base;
        slot = saved;
        return std::pair<Integer, Integer>(base, step);
    };
    {
        auto [base, step] = slope(c[0], 0);
        c[0] = exact_solve(step, target[0] - base, "x^n coefficient is not solvable");
    }
    {
        // coefficient 1 is linear in r and c_1 with c_1 weighted by +-m^2
        auto [base_r, step_r] = slope(r, 1);
        auto [base_c, step_c] = slope(c[1], 1);
        (void)base_c;
        Integer modulus = abs(step_c);
        Integer rhs = mod(Integer(target[1] - base_r), modulus);
        Integer e = mod(step_r, modulus);
        Integer d = gcd(e, modulus);
        if (d == 0 || rhs % d != 0) throw Error(ErrorKind::VerificationFailed, "no r solves the congruence");
        Integer mm = modulus / d;
        r = mm == 1 ? Integer(0) : mod(Integer((rhs / d) * inv_mod(Integer(e / d), mm)), mm);
        Integer base = coeff(1);
        c[1] = exact_solve(step_c, target[1] - base, "x^{n-1} y coefficient is not solvable");
    }
    for (int i = 2; i <= n; ++i) {
        auto [base, step] = slope(c[i], i);
        if (step != 1 && step != -1) throw Error(ErrorKind::VerificationFailed, "triangular solve lost its unit pivot");
        c[i] = (target[i] - base) * step;
    }
    SymmetricPencil lift = build_odd_lift(n, M, r, c);
    if (invariant_form(lift) != target) throw Error(ErrorKind::VerificationFailed, "lift misses the target form");
    W0Element out(lift.mixed(recipe.gamma.inverse().matrix()));
    if (invariant_form(out.pencil) != f) throw Error(ErrorKind::VerificationFailed, "sigma_m roundtrip failed");
    if (abs(Q_of_W0(out)) != M) throw Error(ErrorKind::VerificationFailed, "|Q| of the lift differs from m");
    recipe.r = r;
    recipe.c = c;
    if (recipe_out) *recipe_out = recipe;
    return out;
}

W1Element sigma_m_even(const BinaryForm& f, std::int64_t m) {
    const int n = f.degree();
    if (n < 4 || n % 2 == 1) throw Error(ErrorKind::ContractViolation, "sigma_m (even) needs even degree at least 4");
    factor_small_odd_squarefree(m);
    if (gcd(f[n], Integer(m)) != 1) throw Error(ErrorKind::NotGeneric, "f(0,1) is not coprime to m");
    // f(0,1) = 0 would put x^2 into x f, and then ker B is A-isotropic
    if (f[n] == 0) throw Error(ErrorKind::NotGeneric, "f(0,1) vanishes");
    BinaryForm xf = f.times_x();
    W0Element w = sigma_m_odd(xf, m);
    const int size = n + 1;
    const int g = (n - 2) / 2;
    IntMatrix ker = nullspace(w.pencil.B);
    if (ker.cols() != 1) throw Error(ErrorKind::VerificationFailed, "kernel of B is not one-dimensional");
    IntMatrix inner = unit_rows(g + 1, size);
    IntMatrix outer_rows(g + 2, size);
    outer_rows.topRows(g + 1) = inner;
    outer_rows.row(g + 1) = ker.col(0).transpose();
    IntMatrix outer = saturate(outer_rows);
    IntMatrix u = complete_flag(inner, outer);
    W1Element out = [&] {
        try {
            return W1Element(w.pencil.transformed(u));
        } catch (const Error& e) {
            throw Error(ErrorKind::VerificationFailed, std::string("even lift is not in W1: ") + e.what());
        }
    }();
    if (invariant_form(out.pencil) != xf) throw Error(ErrorKind::VerificationFailed, "even lift changed the form");
    if (abs(q_of_W1(out)) != m) throw Error(ErrorKind::VerificationFailed, "|q| of the even lift differs from m");
    return out;
}

FlagInvariants flag_invariants(const W1Element& w) {
    const SymmetricPencil& P = w.pencil;
    const int size = P.size(), g = w.g;
    FlagInvariants out;
    IntMatrix inner = unit_rows(g + 1, size), outer = unit_rows(g + 2, size);
    out.Q_standard = Q_with_lattice(P, inner);
    out.q_standard = q_with_lattices(P, inner, outer);
    IntVector v = w.kernel();
    IntVector Av = P.A * v;
    Integer vAv = v.dot(Av);
    // e_i - 2 <e_i, v>_A / <v, v>_A v, scaled by <v, v>_A
    IntMatrix rows(g + 1, size);
    for (int i = 0; i <= g; ++i) {
        IntVector e = IntVector::Zero(size);
        e(i) = 1;
        rows.row(i) = (e * vAv - v * (2 * Av(i))).transpose();
    }
    out.reflected_lattice = saturate(rows);
    IntMatrix with_kernel(g + 2, size);
    with_kernel.topRows(g + 1) = out.reflected_lattice;
    with_kernel.row(g + 1) = v.transpose();
    out.reflected_outer = saturate(with_kernel);
    out.Q_reflected = Q_with_lattice(P, out.reflected_lattice);
    out.q_reflected = q_with_lattices(P, out.reflected_lattice, out.reflected_outer);
    return out;
}

bool has_q_zero_shape(const W0Element& w, std::int64_t p) {
    const int g = w.g;
    I64Matrix At = modp::reduce(w.A_top(), p), Bt = modp::reduce(w.B_top(), p);
    for (int j = 0; j <= g; ++j)
        if (Bt(0, j) != 0) return false;
    for (int k = 1; k <= g; ++k) {
        const int row = k - 1, a_col = g + 1 - k;
        for (int j = 0; j < a_col; ++j)
            if (At(row, j) != 0) return false;
        if (At(row, a_col) == 0) return false;
        if (k >= 2) {
            const int b_col = g - k;
            for (int j = 0; j <= g; ++j)
                if ((j == b_col) != (Bt(row, j) != 0)) return false;
        }
    }
    return true;
}

W0Element apply_mod_p(const W0Element& w, const Matrix2& sl2, const IntMatrix& g0, std::int64_t p) {
    SymmetricPencil mixed = w.pencil.mixed(sl2).reduced(p);
    return W0Element(mixed.transformed(g0).reduced(p));
}

QZeroNormalForm normalize_Q_zero(const W0Element& input, std::int64_t p) {
    if (p < 3 || !is_prime_u64(static_cast<std::uint64_t>(p))) throw Error(ErrorKind::InvalidPrime, "need an odd prime");
    W0Element w(input.pencil.reduced(p));
    const int g = w.g, n = 2 * g + 1;
    const Integer P = p;
    if (mod(Q_of_W0(w), P) != 0) throw Error(ErrorKind::QNonzero, "Q is nonzero mod p");
    {
        std::vector<std::int64_t> f;
        for (const auto& c : invariant_form(w.pencil).coeffs()) f.push_back(static_cast<std::int64_t>(mod(c, P)));
        if (has_strong_pattern(f, p)) throw Error(ErrorKind::InYLocus, "invariant form mod p lies in Y");
    }
    QZeroNormalForm out;
    out.p = p;
    auto finish = [&](const Matrix2& sl2, const IntMatrix& g0) {
        out.sl2 = sl2;
        out.g0 = g0;
        out.normal = apply_mod_p(w, sl2, g0, p);
        if (!has_q_zero_shape(out.normal, p)) throw Error(ErrorKind::VerificationFailed, "normal form has the wrong shape");
        I64Matrix At = modp::reduce(out.normal.A_top(), p), Bt = modp::reduce(out.normal.B_top(), p);
        for (int k = 1; k <= g; ++k) out.a_units.push_back(At(k - 1, g + 1 - k));
        for (int k = 2; k <= g; ++k) out.b_units.push_back(Bt(k - 1, g - k));
        return out;
    };
    if (has_q_zero_shape(w, p)) return finish(Matrix2::Identity(), IntMatrix::Identity(n, n));

    // 1. Move a point of P^1(F_p) where the top pencil drops rank to (0 : 1).
    I64Matrix At0 = modp::reduce(w.A_top(), p), Bt0 = modp::reduce(w.B_top(), p);
    std::vector<std::pair<std::int64_t, std::int64_t>> points{{0, 1}};
    for (std::int64_t t = 0; t < p; ++t) points.emplace_back(1, t);
    Matrix2 sl2;
    bool moved = false;
    for (auto [x0, y0] : points) {
        I64Matrix Mv(g, g + 1);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j <= g; ++j) Mv(i, j) = mod(At0(i, j) * x0 - Bt0(i, j) * y0, p);
        if (modp::rank(Mv, p) >= g) continue;
        std::int64_t a = 0, b = 0;
        if (y0 != 0) a = inv_mod(y0, p);
        else b = mod(-inv_mod(x0, p), p);
        sl2 << Integer(a), Integer(b), Integer(x0), Integer(y0);
        moved = true;
        break;
    }
    if (!moved) throw Error(ErrorKind::VerificationFailed, "no rational point where the top pencil drops rank");
    W0Element w1(w.pencil.mixed(sl2).reduced(p));
    I64Matrix At = modp::reduce(w1.A_top(), p), Bt = modp::reduce(w1.B_top(), p);
    I64Matrix colop = I64Matrix::Identity(g + 1, g + 1), rowop = I64Matrix::Identity(g, g);
    auto column_transform = [&](int c0, int width, const I64Matrix& T) {
        At.middleCols(c0, width) = modp::multiply(I64Matrix(At.middleCols(c0, width)), T, p);
        Bt.middleCols(c0, width) = modp::multiply(I64Matrix(Bt.middleCols(c0, width)), T, p);
        colop.middleCols(c0, width) = modp::multiply(I64Matrix(colop.middleCols(c0, width)), T, p);
    };
    auto row_transform = [&](int rows, const I64Matrix& T) {
        At.topRows(rows) = modp::multiply(T, I64Matrix(At.topRows(rows)), p);
        Bt.topRows(rows) = modp::multiply(T, I64Matrix(Bt.topRows(rows)), p);
        rowop.topRows(rows) = modp::multiply(T, I64Matrix(rowop.topRows(rows)), p);
    };

    // 2. Last column of B_top zero, and the minor without it identically zero.
    {
        I64Matrix C(g + 1, g + 1);
        for (int i = 0; i <= g; ++i) {
            IntMatrix Ai(g, g), Bi(g, g);
            for (int j = 0, col = 0; j <= g; ++j) {
                if (j == i) continue;
                for (int r = 0; r < g; ++r) {
                    Ai(r, col) = At(r, j);
                    Bi(r, col) = Bt(r, j);
                }
                ++col;
            }
            auto fi = pencil_determinant(Ai, Bi);
            // signed minors span the kernel of the top pencil
            for (int j = 0; j <= g; ++j) C(i, j) = static_cast<std::int64_t>(mod(i % 2 ? -fi[j] : fi[j], P));
        }
        I64Matrix deps = modp::kernel(I64Matrix(C.transpose()), p);  // lambda^t C = 0
        I64Matrix ker = modp::kernel(Bt, p);
        VectorX<std::int64_t> lambda, u;
        for (Eigen::Index a = 0; a < deps.cols() && lambda.size() == 0; ++a)
            for (Eigen::Index b = 0; b < ker.cols(); ++b) {
                std::int64_t dot = 0;
                for (int i = 0; i <= g; ++i) dot = mod(dot + deps(i, a) * ker(i, b), p);
                if (dot != 0) {
                    lambda = deps.col(a);
                    std::int64_t s = inv_mod(dot, p);
                    u = ker.col(b);
                    for (auto& x : u) x = mod(x * s, p);
                    break;
                }
            }
        if (lambda.size() == 0) throw Error(ErrorKind::VerificationFailed, "no dependency meets the kernel of B_top");
        I64Matrix ut(1, g + 1);
        ut.row(0) = u.transpose();
        I64Matrix perp = modp::kernel(ut, p);
        I64Matrix R(g + 1, g + 1);
        R.topRows(g) = perp.transpose();
        R.row(g) = lambda.transpose();
        column_transform(0, g + 1, modp::inverse(R, p));
        for (int i = 0; i < g; ++i)
            if (Bt(i, g) != 0) throw Error(ErrorKind::VerificationFailed, "last column of B_top did not clear");
        for (const auto& c : pencil_determinant(to_int(At.leftCols(g)), to_int(Bt.leftCols(g))))
            if (mod(c, P) != 0) throw Error(ErrorKind::VerificationFailed, "leading g x g pencil is not singular");
    }

    // 3. Peel the singular g x g pencil from the bottom row up.
    for (int s = g; s >= 2; --s) {
        const int c0 = g - s;
        I64Matrix Ms = At.block(0, c0, s, s);
        I64Matrix kerM = modp::kernel(Ms, p);
        if (kerM.cols() == 0) throw Error(ErrorKind::VerificationFailed, "sub-pencil is not singular");
        column_transform(c0, s, modp::complete_column(kerM.col(0), p));
        VectorX<std::int64_t> nv = Bt.block(0, c0, s, 1);
        if (nv.isZero()) throw Error(ErrorKind::VerificationFailed, "B column vanished while peeling");
        I64Matrix T = modp::inverse(modp::complete_column(nv, p), p);
        T.row(0).swap(T.row(s - 1));
        row_transform(s, T);
        const std::int64_t pivot_inv = inv_mod(Bt(s - 1, c0), p);
        for (int j = c0 + 1; j < g; ++j) {
            std::int64_t alpha = mod(Bt(s - 1, j) * pivot_inv, p);
            if (alpha == 0) continue;
            I64Matrix E = I64Matrix::Identity(s, s);
            E(0, j - c0) = mod(-alpha, p);
            column_transform(c0, s, E);
        }
    }
    if (At(0, g - 1) != 0 || Bt(0, g - 1) != 0) throw Error(ErrorKind::VerificationFailed, "top corner did not vanish");

    // 4. Assemble the G0 element and fix its determinant on the first row.
    I64Matrix gamma2 = colop.transpose();
    std::int64_t d = mod(modp::determinant(rowop, p) * modp::determinant(gamma2, p), p);
    std::int64_t dinv = inv_mod(d, p);
    for (int j = 0; j < g; ++j) rowop(0, j) = mod(rowop(0, j) * dinv, p);
    I64Matrix G = I64Matrix::Zero(n, n);
    G.topLeftCorner(g, g) = rowop;
    G.bottomRightCorner(g + 1, g + 1) = gamma2;
    return finish(sl2, to_int(G));
}

DivisibilityReport check_divisibility_laws(const W0Element& w) {
    DivisibilityReport rep;
    rep.disc = discriminant(invariant_form(w.pencil));
    rep.Q = Q_of_W0(w);
    IntMatrix At = w.A_top(), Bt = w.B_top();
    rep.gram_A = bareiss_determinant(IntMatrix(At * At.transpose()));
    rep.gram_B = bareiss_determinant(IntMatrix(Bt * Bt.transpose()));
    auto divides = [](const Integer& d, const Integer& x) { return d == 0 ? x == 0 : x % d == 0; };
    rep.q_squared_divides = divides(rep.Q * rep.Q, rep.disc);
    rep.gram_divides = divides(rep.gram_A * rep.gram_B, rep.disc);
    return rep;
}

VanishingReport disc_vanishing_predicates(const SymmetricPencil& P) {
    VanishingReport rep;
    const int n = P.size();
    for (int k = 1; k < n && rep.block_zero_k == 0; ++k) {
        bool zero = true;
        for (int i = 0; i < k && zero; ++i)
            for (int j = 0; j < n - k && zero; ++j) zero = P.A(i, j) == 0 && P.B(i, j) == 0;
        if (zero) rep.block_zero_k = k;
    }
    IntMatrix ker = nullspace(P.B);
    rep.kernel_dim = static_cast<int>(ker.cols());
    if (rep.kernel_dim >= 1) {
        // A singular restriction of A to ker B has a rational isotropic
        // vector; a nonsingular one is not decided and reported as false.
        IntMatrix G = ker.transpose() * P.A * ker;
        rep.kernel_isotropic = bareiss_determinant(G) == 0;
    }
    return rep;
}

} // namespace binform
