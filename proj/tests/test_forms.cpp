#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <numeric>

#include <unsupported/Eigen/Polynomials>

using namespace binform;
using binform::testing::maximal_at_p_oracle;
using binform::testing::random_form;
using binform::testing::random_sl2;

TEST_CASE("discriminant of small forms") {
    CHECK(discriminant(BinaryForm{1, 1, 1}) == -3);
    CHECK(discriminant(BinaryForm{1, 0, -1, 0}) == 4);
    CHECK(discriminant(BinaryForm{0, 1, 0, 0}) == 0);
    CHECK(discriminant(BinaryForm{0, 0, 1}) == 0);
    CHECK(discriminant(BinaryForm{0, 1, 0}) == 1);
    CHECK(discriminant(BinaryForm{2, -3}) == 1);
}

TEST_CASE("height") {
    CHECK(height(BinaryForm{1, 1, 1}) == 1);
    CHECK(height(BinaryForm{3, 0, 0, -7}) == 7);
    CHECK(height(BinaryForm{0, 0, 0}) == 0);
}

TEST_CASE("discriminant matches the root product for split forms") {
    for (int trial = 0; trial < 200; ++trial) {
        Stream rng(11, "forms.disc.split", trial);
        int n = static_cast<int>(rng.uniform(2, 6));
        long long a0 = rng.uniform(1, 4) * (rng.coin() ? 1 : -1);
        std::vector<long long> roots(n);
        for (auto& r : roots) r = rng.uniform(-5, 5);
        // a0 * prod (x - r y), coefficients low power of y last
        std::vector<Integer> poly{Integer(a0)};
        for (long long r : roots) {
            std::vector<Integer> next(poly.size() + 1, Integer(0));
            for (std::size_t i = 0; i < poly.size(); ++i) {
                next[i] += poly[i];
                next[i + 1] -= poly[i] * r;
            }
            poly = next;
        }
        Integer expected = 1;
        for (int i = 0; i < 2 * n - 2; ++i) expected *= a0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) expected *= Integer(roots[i] - roots[j]) * (roots[i] - roots[j]);
        CHECK(discriminant(BinaryForm(poly)) == expected);
    }
}

TEST_CASE("closed forms agree with the resultant") {
    for (int trial = 0; trial < 300; ++trial) {
        Stream rng(11, "forms.disc.closed", trial);
        BinaryForm q = random_form(rng, 2, 20), c = random_form(rng, 3, 20);
        CHECK(discriminant(q) == discriminant_quadratic(q[0], q[1], q[2]));
        CHECK(discriminant(c) == discriminant_cubic(c[0], c[1], c[2], c[3]));
        std::vector<__int128> small;
        for (const auto& a : c.coeffs()) small.push_back(static_cast<long long>(a));
        CHECK(Integer(static_cast<long long>(discriminant_of<__int128>(small))) == discriminant(c));
    }
}

TEST_CASE("action is a right-compatible substitution") {
    BinaryForm f{1, 2, 3};
    CHECK(act(UnimodularMap(), f) == f);
    for (int trial = 0; trial < 100; ++trial) {
        Stream rng(11, "forms.act", trial);
        int n = static_cast<int>(rng.uniform(1, 5));
        BinaryForm g = random_form(rng, n, 9);
        UnimodularMap a = random_sl2(rng), b = random_sl2(rng);
        CHECK(act(b, act(a, g)) == act(b * a, g));
        CHECK(act(a.inverse(), act(a, g)) == g);
        // pointwise: (gamma . f)(x, y) = f((x, y) gamma)
        Integer x = rng.uniform(-4, 4), y = rng.uniform(-4, 4);
        CHECK(act(a, g)(x, y) == g(x * a(0, 0) + y * a(1, 0), x * a(0, 1) + y * a(1, 1)));
    }
    CHECK(discriminant(act(UnimodularMap(2, 1, 7, 4), BinaryForm{1, 1, 1})) == -3);
}

TEST_CASE("discriminant invariance and swap symmetry") {
    for (int trial = 0; trial < 200; ++trial) {
        Stream rng(11, "forms.invariance", trial);
        int n = static_cast<int>(rng.uniform(2, 6));
        BinaryForm f = random_form(rng, n, 10);
        CHECK(discriminant(act(random_sl2(rng), f)) == discriminant(f));
        CHECK(discriminant(f.swapped()) == discriminant(f));
    }
}

TEST_CASE("parse and print") {
    CHECK(BinaryForm::parse("3:1,0,-1,0") == BinaryForm{1, 0, -1, 0});
    CHECK(BinaryForm::parse(" 2:+1, -2 ,3").str() == "2:1,-2,3");
    CHECK_THROWS_AS(BinaryForm::parse("3:1,2"), Error);
    CHECK_THROWS_AS(BinaryForm::parse("x:1,2"), Error);
    CHECK_THROWS_AS(BinaryForm::parse("2:1,a,3"), Error);
    CHECK_THROWS_AS(UnimodularMap(2, 0, 0, 1), Error);
}

TEST_CASE("ring of a form") {
    auto gaussian = ring_of(BinaryForm{1, 0, 1});
    CHECK(gaussian.disc == -4);
    CHECK(gaussian.table[1](1, 0) == -1);
    CHECK(gaussian.table[1](1, 1) == 0);

    auto r = ring_of(BinaryForm{2, 2, 1});
    CHECK(r.disc == -4);
    CHECK(r.table[1](1, 0) == -2);
    CHECK(r.table[1](1, 1) == -2);

    auto cubic = ring_of(BinaryForm{1, 0, -1, 0});
    CHECK(cubic.disc == 4);
    // zeta_1 = theta, zeta_2 = theta^2 with theta^3 = theta
    CHECK(cubic.table[1](1, 2) == 1);
    CHECK(cubic.table[1](2, 1) == 1);
    CHECK(cubic.table[2](2, 2) == 1);

    CHECK_THROWS_AS(ring_of(BinaryForm{0, 1, 1}), Error);
    CHECK_THROWS_AS(ring_of(BinaryForm{1, 2, 1}), Error);
}

TEST_CASE("ring tables are commutative, associative and have discriminant Delta") {
    for (int trial = 0; trial < 60; ++trial) {
        Stream rng(11, "forms.ring", trial);
        int n = static_cast<int>(rng.uniform(2, 5));
        BinaryForm f = random_form(rng, n, 12);
        if (f[0] == 0 || discriminant(f) == 0) continue;
        auto ring = ring_of(f);
        CHECK(bareiss_determinant(ring.trace_gram()) == discriminant(f));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    IntVector ei = IntVector::Zero(n), ej = IntVector::Zero(n), ek = IntVector::Zero(n);
                    ei(i) = ej(j) = ek(k) = 1;
                    CHECK(ring.multiply(ring.multiply(ei, ej), ek) == ring.multiply(ei, ring.multiply(ej, ek)));
                }
    }
}

TEST_CASE("maximality examples") {
    CHECK(is_maximal_at_p(BinaryForm{1, 1, 1}, 2));
    CHECK(is_maximal_at_p(BinaryForm{1, 1, 1}, 3));
    CHECK_FALSE(is_maximal_at_p(BinaryForm{4, 0, 1}, 2));
    CHECK_FALSE(is_maximal_at_p(BinaryForm{1, 0, -1}, 2));
    CHECK_FALSE(is_maximal_at_p(BinaryForm{2, 0, 2}, 2));
    CHECK_THROWS_AS(is_maximal_at_p(BinaryForm{1, 1, 1}, 4), Error);
    CHECK(is_maximal(BinaryForm{1, 1, 1}) == Tristate::yes);
    CHECK(is_maximal(BinaryForm{4, 0, 1}) == Tristate::no);
}

TEST_CASE("maximality agrees with the p-radical oracle") {
    int checked = 0;
    for (int trial = 0; trial < 600; ++trial) {
        Stream rng(11, "forms.maximal.oracle", trial);
        int n = static_cast<int>(rng.uniform(2, 4));
        long long p = std::array<long long, 3>{2, 3, 5}[rng.uniform(0, 2)];
        // Bias toward p^2 | Delta so the interesting branches are reached.
        std::vector<Integer> c(n + 1);
        for (int i = 0; i <= n; ++i) c[i] = rng.uniform(-12, 12) * (rng.uniform(0, 2) == 0 ? p : 1);
        BinaryForm f(c);
        if (f[0] == 0 || discriminant(f) == 0) continue;
        ++checked;
        INFO(f.str(), " p=", p);
        CHECK(is_maximal_at_p(f, static_cast<std::uint64_t>(p)) == maximal_at_p_oracle(f, p));
    }
    CHECK(checked > 300);
}

TEST_CASE("maximality depends only on f mod p^2") {
    for (int trial = 0; trial < 300; ++trial) {
        Stream rng(11, "forms.maximal.locality", trial);
        int n = static_cast<int>(rng.uniform(2, 6));
        long long p = std::array<long long, 4>{2, 3, 5, 7}[rng.uniform(0, 3)];
        BinaryForm f = random_form(rng, n, 30), g = random_form(rng, n, 30);
        std::vector<Integer> h(n + 1);
        for (int i = 0; i <= n; ++i) h[i] = f[i] + p * p * g[i];
        CHECK(is_maximal_at_p(f, p) == is_maximal_at_p(BinaryForm(h), p));
    }
}

TEST_CASE("squarefree discriminant implies maximal") {
    for (int trial = 0; trial < 200; ++trial) {
        Stream rng(11, "forms.maximal.sqfree", trial);
        BinaryForm f = random_form(rng, static_cast<int>(rng.uniform(2, 5)), 20);
        Integer d = discriminant(f);
        if (d == 0) continue;
        if (is_squarefree(d) == Tristate::yes) CHECK(is_maximal(f) == Tristate::yes);
    }
}

TEST_CASE("factoring") {
    auto f = factor(Integer(2 * 2 * 3 * 1000003LL) * Integer(1000033LL) * Integer(1000033LL));
    CHECK(f.complete());
    REQUIRE(f.factors.size() == 4);
    CHECK(f.factors[0] == std::make_pair(Integer(2), 2));
    CHECK(f.factors[3] == std::make_pair(Integer(1000033), 2));
    // below trial_bound^3 a non-square cofactor needs no splitting
    CHECK(is_squarefree(Integer(10000019LL) * 10000079LL * 6) == Tristate::yes);
    // above it, rho has to split the cofactor
    Integer mid = Integer(10000000019LL) * Integer(10000000033LL);
    CHECK(is_squarefree(mid) == Tristate::yes);
    CHECK(is_squarefree(mid * 10000000019LL) == Tristate::no);
    Integer big = Integer("1000000000000000003") * Integer("1000000000000000009");
    CHECK(is_squarefree(big, FactorBudget{1000000, 1u << 12, 2}) != Tristate::no);
    CHECK(is_squarefree(Integer("1000000000000000003") * Integer("1000000000000000003")) == Tristate::no);
    bool complete = true;
    FactorBudget tiny{100, 16, 1};
    auto sq = square_divisor_primes(Integer("1000000000000000003") * Integer("1000000000000000009") * 1000003, tiny,
                                    complete);
    CHECK_FALSE(complete);
    CHECK(is_squarefree(Integer(0)) == Tristate::no);
}

namespace {

// Double-precision Minkowski Gram from independent root finding.
Eigen::MatrixXd reference_gram(const BinaryForm& f) {
    const int n = f.degree();
    Eigen::VectorXd coeffs(n + 1);
    for (int i = 0; i <= n; ++i) coeffs(i) = static_cast<double>(f[n - i]);
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
    std::vector<std::vector<double>> rows(n);
    for (int r = 0; r < n; ++r) {
        std::complex<double> z = solver.roots()(r);
        if (z.imag() < -1e-9) continue;
        bool real = std::abs(z.imag()) <= 1e-9;
        for (int k = 0; k < n; ++k) {
            std::complex<double> v = k == 0 ? 1.0 : 0.0;
            for (int i = 0; i < k; ++i) v += static_cast<double>(f[i]) * std::pow(z, k - i);
            rows[k].push_back(v.real());
            if (!real) rows[k].push_back(v.imag());
        }
    }
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            g(i, j) = 0;
            for (std::size_t c = 0; c < rows[i].size(); ++c) g(i, j) += rows[i][c] * rows[j][c];
        }
    return g;
}

// Brute force over a box: returns +1 when the basis is strictly reduced with
// margin, -1 when a strictly shorter admissible vector exists, 0 otherwise.
int brute_force_reduced(const BinaryForm& f, int box) {
    const int n = f.degree();
    Eigen::MatrixXd g = reference_gram(f);
    double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues()(0);
    if (lmin * box * box <= g.diagonal().maxCoeff() * 1.01) return 0;
    std::vector<int> x(n, -box);
    bool tight = false;
    while (true) {
        for (int k = 0; k < n; ++k) {
            int gk = 0;
            for (int i = k; i < n; ++i) gk = std::gcd(gk, std::abs(x[i]));
            bool is_ek = true;
            for (int i = 0; i < n; ++i) is_ek = is_ek && x[i] == (i == k ? 1 : 0);
            bool is_minus_ek = true;
            for (int i = 0; i < n; ++i) is_minus_ek = is_minus_ek && x[i] == (i == k ? -1 : 0);
            if (gk != 1 || is_ek || is_minus_ek) continue;
            double q = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) q += g(i, j) * x[i] * x[j];
            double rel = (q - g(k, k)) / g(k, k);
            if (rel < -1e-7) return -1;
            if (rel < 1e-7) tight = true;
        }
        int i = 0;
        while (i < n && x[i] == box) x[i++] = -box;
        if (i == n) break;
        ++x[i];
    }
    return tight ? 0 : 1;
}

} // namespace

TEST_CASE("strong Minkowski reduction") {
    // theta and theta - 1 have the same length
    CHECK(is_strongly_minkowski_reduced(BinaryForm{1, -1, -1}).verdict == Reduction::no);
    CHECK(is_strongly_minkowski_reduced(BinaryForm{1, 0, -2}).verdict == Reduction::yes);
    // 1 and i have the same length: a tie that balls cannot resolve
    CHECK(is_strongly_minkowski_reduced(BinaryForm{1, 0, 1}).verdict == Reduction::uncertain);
    CHECK_THROWS_AS(is_strongly_minkowski_reduced(BinaryForm{1, 2, 1}), Error);

    int agreed = 0, decided = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Stream rng(11, "forms.minkowski", trial);
        int n = static_cast<int>(rng.uniform(2, 4));
        BinaryForm f = random_form(rng, n, 6);
        if (f[0] == 0 || discriminant(f) == 0) continue;
        int expect = brute_force_reduced(f, 6);
        if (expect == 0) continue;
        ++decided;
        auto got = is_strongly_minkowski_reduced(f).verdict;
        INFO(f.str());
        CHECK(got == (expect > 0 ? Reduction::yes : Reduction::no));
        agreed += got == (expect > 0 ? Reduction::yes : Reduction::no);
    }
    CHECK(decided > 100);
}

TEST_CASE("S_n certificates") {
    CHECK(certify_sn_galois(BinaryForm{1, 0, 0, 0, -1, -1}, 200).certified);
    CHECK_FALSE(certify_sn_galois(BinaryForm{1, 0, 0, -1}, 200).certified);  // x^3 - 1 has a rational root
    CHECK_FALSE(certify_sn_galois(BinaryForm{1, 0, 0, 0, -1, -1}, 0).certified);
    CHECK_FALSE(certify_sn_galois(BinaryForm{1, 0, 0, 0, 1}, 300).certified);  // cyclotomic, Galois group V4
}
