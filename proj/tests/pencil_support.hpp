#pragma once

// Random pencils, block unimodular matrices and weakly divisible forms for
// the pencil suites.

#include <vector>

#include "binform/localdens.hpp"
#include "binform/pencils.hpp"
#include "binform/rng.hpp"
#include "support.hpp"

namespace binform::testing {

inline IntMatrix random_symmetric(Stream& rng, int n, long long bound) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.uniform(-bound, bound);
    return m;
}

inline W0Element random_w0(Stream& rng, int n, long long bound) {
    const int g = (n - 1) / 2;
    IntMatrix A = random_symmetric(rng, n, bound), B = random_symmetric(rng, n, bound);
    A.topLeftCorner(g, g).setZero();
    B.topLeftCorner(g, g).setZero();
    return W0Element(SymmetricPencil(A, B));
}

// Product of elementary matrices, then the sign of one row flipped when
// det_sign is -1.
inline IntMatrix random_unimodular(Stream& rng, int k, int steps, int det_sign = 1) {
    IntMatrix u = IntMatrix::Identity(k, k);
    if (k > 1) {
        for (int s = 0; s < steps; ++s) {
            int i = static_cast<int>(rng.uniform(0, k - 1)), j = static_cast<int>(rng.uniform(0, k - 2));
            if (j >= i) ++j;
            u.row(i) += Integer(rng.uniform(-2, 2)) * u.row(j);
        }
    }
    if (det_sign < 0) u.row(0) = -u.row(0);
    return u;
}

inline BlockUnimodular random_g0(Stream& rng, int g, long long bound) {
    const int n = 2 * g + 1;
    int sign = rng.coin() ? 1 : -1;
    IntMatrix m = IntMatrix::Zero(n, n);
    m.topLeftCorner(g, g) = random_unimodular(rng, g, 6, sign);
    m.bottomRightCorner(g + 1, g + 1) = random_unimodular(rng, g + 1, 6, sign);
    for (int i = g; i < n; ++i)
        for (int j = 0; j < g; ++j) m(i, j) = rng.uniform(-bound, bound);
    return BlockUnimodular(BlockUnimodular::Shape::G0, g, m);
}

inline BlockUnimodular random_g1(Stream& rng, int g, long long bound) {
    const int n = 2 * g + 3;
    int s1 = rng.coin() ? 1 : -1, s2 = rng.coin() ? 1 : -1;
    IntMatrix m = IntMatrix::Zero(n, n);
    m.topLeftCorner(g + 1, g + 1) = random_unimodular(rng, g + 1, 6, s1);
    m(g + 1, g + 1) = s2;
    m.bottomRightCorner(g + 1, g + 1) = random_unimodular(rng, g + 1, 6, s1 * s2);
    for (int i = g + 1; i < n; ++i)
        for (int j = 0; j < i && j < g + 2; ++j)
            if (!(i == g + 1 && j == g + 1)) m(i, j) = rng.uniform(-bound, bound);
    return BlockUnimodular(BlockUnimodular::Shape::G1, g, m);
}

inline std::vector<std::int64_t> odd_prime_factors(std::int64_t m) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 3; p <= m; p += 2)
        if (m % p == 0) {
            out.push_back(p);
            while (m % p == 0) m /= p;
        }
    return out;
}

inline bool weak_at_all(const BinaryForm& f, std::int64_t m) {
    for (std::int64_t p : odd_prime_factors(m))
        if (classify(ResidueForm::of(f, p)) != DiscClass::WeakP2) return false;
    return true;
}

// m^2 b_0 x^n + m b_1 x^{n-1} y + b_2 x^{n-2} y^2 + ..., redrawn until the
// class at every p | m is WeakP2 (and f(0,1) nonzero and prime to m when
// generic).
inline BinaryForm random_weak_form(Stream& rng, int n, std::int64_t m, long long bound, bool generic = false) {
    while (true) {
        std::vector<Integer> c(n + 1);
        for (auto& x : c) x = rng.uniform(-bound, bound);
        c[0] = c[0] * m * m;
        c[1] = c[1] * m;
        BinaryForm f(c);
        if (gcd(c[0] / (Integer(m) * m), Integer(m)) != 1) continue;
        if (generic && (c[n] == 0 || gcd(c[n], Integer(m)) != 1)) continue;
        if (discriminant(f) == 0) continue;
        if (weak_at_all(f, m)) return f;
    }
}

} // namespace binform::testing
