#include <doctest.h>

#include <cmath>

#include "binform/latlab.hpp"
#include "support.hpp"

using namespace binform;
using namespace binform::testing;

namespace {

IntMatrix mat(std::initializer_list<std::initializer_list<long long>> rows) {
    IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (long long x : row) m(i, j++) = x;
        ++i;
    }
    return m;
}

IntVector vec(std::initializer_list<long long> xs) {
    IntVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (long long x : xs) v(i++) = x;
    return v;
}

LatticeBasis random_primitive(Stream& rng, int r, int n, long long bound) {
    while (true) {
        IntMatrix rows(r, n);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < n; ++j) rows(i, j) = rng.uniform(-bound, bound);
        if (exact_rank(rows) != r || !is_primitive(rows)) continue;
        return LatticeBasis(rows);
    }
}

} // namespace

TEST_CASE("star product") {
    CHECK(star(vec({1, 0}), vec({0, 1})) == mat({{0, 1}, {1, 0}}));
    CHECK(star(vec({1, 0}), vec({1, 0})) == mat({{1, 0}, {0, 0}}));
    CHECK(star(vec({1, 1}), vec({1, -1})) == mat({{2, 0}, {0, -2}}));
    CHECK(star(vec({1, 2}), vec({2, 4})) == mat({{2, 4}, {4, 8}}));
    Stream rng(30, "latlab.star", 0);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + trial % 4;
        IntVector v(n), w(n);
        for (int i = 0; i < n; ++i) {
            v(i) = rng.uniform(-4, 4);
            w(i) = rng.uniform(-4, 4);
        }
        if (trial % 7 == 0) w = v * Integer(rng.uniform(-2, 2));
        if (v.isZero() || w.isZero()) continue;
        IntMatrix s = star(v, w);
        CHECK(s == s.transpose());
        // |v|^2 |w|^2 <= |v * w|^2 <= 4 |v|^2 |w|^2
        Integer lhs = v.squaredNorm() * w.squaredNorm(), mid = frobenius(s, s);
        CHECK(lhs <= mid);
        CHECK(mid <= 4 * lhs);
    }
}

TEST_CASE("basis of S(Lambda)") {
    auto one = s_lambda_basis(LatticeBasis(mat({{1, 0}})));
    REQUIRE(one.size() == 1);
    CHECK(one[0] == mat({{1, 0}, {0, 0}}));
    auto full = s_lambda_basis(LatticeBasis(mat({{1, 0}, {0, 1}})));
    REQUIRE(full.size() == 3);
    CHECK(full[0] == mat({{1, 0}, {0, 0}}));
    CHECK(full[1] == mat({{0, 1}, {1, 0}}));
    CHECK(full[2] == mat({{0, 0}, {0, 1}}));
    try {
        s_lambda_basis(LatticeBasis(mat({{2, 0}})));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPrimitive);
    }
    CHECK_THROWS_AS(s_lambda_basis(LatticeBasis(mat({{1, 1, 0}, {1, -1, 0}}))), Error);

    // Oracle: every small symmetric matrix whose rows lie in Lambda (x) R is an
    // integer combination of the basis.
    Stream rng(31, "latlab.slambda", 0);
    for (int trial = 0; trial < 4; ++trial) {
        LatticeBasis L = random_primitive(rng, 2, 4, 2);
        auto basis = s_lambda_basis(L);
        IntMatrix flat(3, 16);
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) flat(k, 4 * i + j) = basis[k](i, j);
        // S = L^t M L for symmetric rational M; sweep integral M and M / 2, M / 3
        int found = 0, integral = 0;
        for (int den = 1; den <= 3; ++den)
            for (long long a = -3; a <= 3; ++a)
                for (long long b = -3; b <= 3; ++b)
                    for (long long c = -3; c <= 3; ++c) {
                        RatMatrix M(2, 2);
                        M << Rational(a, den), Rational(b, den), Rational(b, den), Rational(c, den);
                        RatMatrix S = to_rational(L.rows).transpose() * M * to_rational(L.rows);
                        bool is_integral = true;
                        for (Eigen::Index i = 0; i < 4; ++i)
                            for (Eigen::Index j = 0; j < 4; ++j) is_integral = is_integral && denominator(S(i, j)) == 1;
                        ++found;
                        if (!is_integral) continue;
                        ++integral;
                        IntMatrix row(1, 16);
                        for (int i = 0; i < 4; ++i)
                            for (int j = 0; j < 4; ++j) row(0, 4 * i + j) = numerator(S(i, j));
                        CHECK_NOTHROW(coordinates_in(row, flat));
                    }
        CHECK(integral > 0);
        CHECK(found > integral);
    }
}

TEST_CASE("covolume") {
    CHECK(covolume(LatticeBasis(mat({{1, 0}}))).squared == 1);
    CHECK(covolume(LatticeBasis(mat({{2, 0}}))).value == doctest::Approx(2.0));
    Covolume c = covolume(LatticeBasis(mat({{1, 1}, {0, 2}})));
    CHECK(c.squared == 4);
    CHECK(c.value == doctest::Approx(2.0));
}

TEST_CASE("covolume identity for S(Lambda)") {
    auto z2 = covolume_identity_check(LatticeBasis(mat({{1, 0}, {0, 1}})));
    CHECK(z2.lhs == 2);
    CHECK(z2.holds);
    auto line = covolume_identity_check(LatticeBasis(mat({{1, 2, 2}})));
    CHECK(line.lhs == 81);  // d(Lambda)^4 with d^2 = 9
    CHECK(line.holds);
    Stream rng(32, "latlab.covol", 0);
    for (int trial = 0; trial < 60; ++trial) {
        int r = 1 + trial % 3, n = r + 1 + trial % 3;
        LatticeBasis L = random_primitive(rng, r, n, 3);
        auto id = covolume_identity_check(L);
        CHECK(id.holds);
        // independent: Gram of the flattened star family
        auto basis = s_lambda_basis(L);
        IntMatrix flat(static_cast<Eigen::Index>(basis.size()), n * n);
        for (std::size_t k = 0; k < basis.size(); ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) flat(static_cast<Eigen::Index>(k), n * i + j) = basis[k](i, j);
        CHECK(bareiss_determinant(IntMatrix(flat * flat.transpose())) == id.lhs);
    }
}

TEST_CASE("LLL and short vectors") {
    IntMatrix rows = mat({{1, 0, 0}, {17, 1, 0}, {40, 3, 1}});
    IntMatrix red = lll_reduce(rows);
    CHECK(std::abs(bareiss_determinant(red).convert_to<long long>()) == 1);
    for (int i = 0; i < 3; ++i) CHECK(red.row(i).squaredNorm() <= 2);
    // Z^2: vectors of norm <= 2 are 0, 4 units, 4 diagonals
    auto sv = short_vectors(mat({{1, 0}, {0, 1}}), 2, 1000);
    CHECK(sv.size() == 9);
    CHECK_THROWS_AS(short_vectors(mat({{1, 0}, {0, 1}}), 10000, 50), Error);
}

TEST_CASE("reduced basis and successive minima") {
    auto z2 = reduced_basis(LatticeBasis(mat({{1, 0}, {0, 1}})));
    CHECK(z2.minima_squared == std::vector<Integer>{1, 1});
    CHECK(z2.basis == mat({{0, 1}, {1, 0}}));
    auto skew = reduced_basis(LatticeBasis(mat({{5, 0}, {3, 1}})));
    CHECK(skew.minima_squared == std::vector<Integer>{5, 5});
    CHECK(skew.squared_lengths == std::vector<Integer>{5, 5});
    CHECK(abs(bareiss_determinant(skew.basis)) == 5);
    auto rank1 = reduced_basis(LatticeBasis(mat({{-2, 4, 1}})));
    CHECK(rank1.basis == mat({{2, -4, -1}}));
    CHECK(rank1.minima_squared == std::vector<Integer>{21});
    CHECK(z2.almost_reduced(Rational(1), 1));
    CHECK(skew.almost_reduced(Rational(1), 25));

    // Oracle: brute force over a coefficient box for the first minimum and
    // for the number of independent vectors below each minimum.
    Stream rng(33, "latlab.reduced", 0);
    for (int trial = 0; trial < 30; ++trial) {
        int r = 2 + trial % 2, n = 3;
        IntMatrix rows(r, n);
        do {
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < n; ++j) rows(i, j) = rng.uniform(-6, 6);
        } while (exact_rank(rows) != r);
        LatticeBasis L(rows);
        auto red = reduced_basis(L);
        CHECK(abs(bareiss_determinant(IntMatrix(red.basis * red.basis.transpose()))) ==
              bareiss_determinant(L.gram()));
        CHECK(coordinates_in(red.basis, L.rows).rows() == r);
        CHECK(coordinates_in(L.rows, red.basis).rows() == r);
        for (int k = 1; k < r; ++k) CHECK(red.minima_squared[k - 1] <= red.minima_squared[k]);
        // in rank <= 3 the greedy basis realizes the minima
        CHECK(red.squared_lengths == red.minima_squared);
        IntMatrix lll = lll_reduce(rows);
        Integer best = -1;
        const int box = 4;
        std::vector<long long> x(r, -box);
        while (true) {
            IntVector v = IntVector::Zero(n);
            bool zero = true;
            for (int i = 0; i < r; ++i) {
                v += Integer(x[i]) * lll.row(i).transpose();
                zero = zero && x[i] == 0;
            }
            if (!zero && (best < 0 || v.squaredNorm() < best)) best = v.squaredNorm();
            int i = 0;
            while (i < r && x[i] == box) x[i++] = -box;
            if (i == r) break;
            ++x[i];
        }
        CHECK(red.minima_squared[0] == best);
    }
}

TEST_CASE("lattice points in boxes against successive minima") {
    CHECK(count_points_in_box(LatticeBasis(mat({{1, 0}, {0, 1}})), 2) == 25);
    CHECK(count_points_in_box(LatticeBasis(mat({{2, 0}})), 5) == 5);
    Stream rng(34, "latlab.schmidt", 0);
    double fitted = 0;
    for (int trial = 0; trial < 40; ++trial) {
        int r = 1 + trial % 3, n = 3;
        LatticeBasis L = random_primitive(rng, r, n, 5);
        auto red = reduced_basis(L);
        long long Y = 1 + trial % 7;
        double count = static_cast<double>(count_points_in_box(L, Y));
        double best = 1, prod = 1;
        for (int j = 0; j < r; ++j) {
            prod *= static_cast<double>(Y) / std::sqrt(red.minima_squared[j].convert_to<double>());
            best = std::max(best, prod);
        }
        fitted = std::max(fitted, count / best);
        // prod (1 + 2 sqrt(n) Y / mu_j) <= (4 sqrt(n))^r max_j Y^j / (mu_1...mu_j)
        CHECK(count <= std::pow(4 * std::sqrt(3.0), r) * best);
    }
    CHECK(fitted > 0);
}

TEST_CASE("C(r, s)") {
    CHECK(C_constant(1, TorusScaling::identity(3)) == 1);
    CHECK(C_constant(2, TorusScaling::identity(4)) == 1);
    TorusScaling t({Rational(4), Rational(2), Rational(1)});
    CHECK(C_constant(1, t) == 8);
    CHECK(delta(TorusScaling::identity(3)) == 1);
    CHECK_THROWS_AS(C_constant(3, t), Error);
    Stream rng(35, "latlab.crs", 0);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + trial % 4;
        std::vector<Rational> v;
        for (int i = 0; i < n; ++i) v.emplace_back(rng.uniform(1, 9), rng.uniform(1, 9));
        TorusScaling s(v);
        CHECK(C_constant(n - 1, s) * delta(s) == 1);
    }
    TorusScaling parsed = TorusScaling::parse("4,1/2,1/2", 3);
    CHECK(parsed.determinant_one());
    CHECK(parsed.sorted());
    CHECK(parsed.str() == "4,1/2,1/2");
    CHECK_THROWS_AS(TorusScaling::parse("1,x", 2), Error);
    CHECK_THROWS_AS(TorusScaling::parse("1,0", 2), Error);
}

TEST_CASE("counting rank-r symmetric matrices") {
    auto id2 = TorusScaling::identity(2), id3 = TorusScaling::identity(3);
    // frozen from an independent brute force over the box
    CHECK(count_rank_r_symmetric(2, 1, Rational(5), id2).count == 48);
    CHECK(count_rank_r_symmetric(2, 1, Rational(1), id2).count == 8);
    CHECK(count_rank_r_symmetric(3, 1, Rational(2), id3).count == 52);
    CHECK(count_rank_r_symmetric(3, 2, Rational(2), id3).count == 1460);
    TorusScaling skew({Rational(2), Rational(1), Rational(1, 2)});
    CHECK(count_rank_r_symmetric(3, 1, Rational(2), skew).count == 36);
    CHECK(count_rank_r_symmetric(3, 2, Rational(2), skew).count == 1694);
    CHECK(count_rank_r_symmetric(2, 1, Rational(1, 2), id2).count == 0);
    CHECK_THROWS_AS(count_rank_r_symmetric(3, 3, Rational(2), id3), Error);
    CountOptions tiny;
    tiny.budget = 100;
    try {
        count_rank_r_symmetric(3, 2, Rational(10), id3, tiny);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BudgetExceeded);
    }

    // fast paths agree with plain enumeration
    CountOptions brute;
    brute.brute_force = true;
    brute.threads = 2;
    std::vector<TorusScaling> scalings{id3, skew, TorusScaling({Rational(3, 2), Rational(1), Rational(2, 3)})};
    for (const auto& s : scalings)
        for (int r = 1; r <= 2; ++r)
            for (long long Y : {1, 3}) {
                auto fast = count_rank_r_symmetric(3, r, Rational(Y), s);
                auto slow = count_rank_r_symmetric(3, r, Rational(Y), s, brute);
                CHECK(fast.count == slow.count);
                CHECK(slow.method == "enumeration");
            }
    auto id4 = TorusScaling::identity(4);
    CHECK(count_rank_r_symmetric(4, 1, Rational(1), id4).count ==
          count_rank_r_symmetric(4, 1, Rational(1), id4, brute).count);

    // monotone in Y, and the ratio is finite
    std::uint64_t last = 0;
    for (long long Y = 1; Y <= 12; ++Y) {
        auto rep = count_rank_r_symmetric(3, 2, Rational(Y), skew);
        CHECK(rep.count >= last);
        CHECK(std::isfinite(rep.ratio));
        last = rep.count;
    }
}
