#pragma once

// Independent reference computations used as oracles by the test suites.

#include <vector>

#include "binform/forms.hpp"
#include "binform/linalg.hpp"
#include "binform/rng.hpp"

namespace binform::testing {

inline BinaryForm random_form(Stream& rng, int n, long long bound) {
    std::vector<Integer> c(n + 1);
    for (auto& x : c) x = rng.uniform(-bound, bound);
    return BinaryForm(c);
}

inline UnimodularMap random_sl2(Stream& rng, int steps = 4) {
    UnimodularMap g;
    for (int i = 0; i < steps; ++i) {
        long long t = rng.uniform(-3, 3);
        g = rng.coin() ? g * UnimodularMap(1, t, 0, 1) : g * UnimodularMap(1, 0, t, 1);
    }
    return g;
}

// Maximality at p by one round of the Pohst-Zassenhaus test on the ring table:
// R is p-maximal iff no x in R \ pR satisfies x * I_p inside p * I_p, where
// I_p is the p-radical, i.e. the preimage of the nilradical of R / pR.
inline bool maximal_at_p_oracle(const BinaryForm& f, long long p) {
    RankNRing ring = ring_of(f);
    const int n = ring.rank;
    auto mulp = [&](const std::vector<long long>& x, const std::vector<long long>& y) {
        std::vector<long long> out(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!x[i] || !y[j]) continue;
                for (int k = 0; k < n; ++k) {
                    long long t = static_cast<long long>(mod(ring.table[i](j, k), Integer(p)));
                    out[k] = (out[k] + x[i] * y[j] % p * t) % p;
                }
            }
        return out;
    };
    long long q = p;
    while (q < n) q *= p;
    // Frobenius power x -> x^q is F_p-linear; its kernel is the nilradical.
    I64Matrix frob(n, n);
    for (int i = 0; i < n; ++i) {
        std::vector<long long> e(n, 0), acc(n, 0);
        e[i] = 1;
        acc[0] = 1;
        std::vector<long long> base = e;
        for (long long k = q; k; k >>= 1) {
            if (k & 1) acc = mulp(acc, base);
            base = mulp(base, base);
        }
        for (int k = 0; k < n; ++k) frob(k, i) = acc[k];
    }
    I64Matrix rad = modp::kernel(frob, p);
    // Generators of I_p: radical lifts and p * e_i.
    std::vector<IntVector> gens;
    for (Eigen::Index c = 0; c < rad.cols(); ++c) {
        IntVector v(n);
        for (int i = 0; i < n; ++i) v(i) = rad(i, c);
        gens.push_back(v);
    }
    for (int i = 0; i < n; ++i) {
        IntVector v = IntVector::Zero(n);
        v(i) = p;
        gens.push_back(v);
    }
    // y lies in p I_p iff y = 0 mod p and y / p reduces into the radical.
    const Eigen::Index radrank = rad.cols();
    auto in_p_ip = [&](const IntVector& y) {
        I64Matrix aug(n, radrank + 1);
        for (int i = 0; i < n; ++i) {
            if (mod(y(i), Integer(p)) != 0) return false;
            for (Eigen::Index c = 0; c < radrank; ++c) aug(i, c) = rad(i, c);
            aug(i, radrank) = static_cast<long long>(mod(Integer(y(i) / p), Integer(p)));
        }
        return modp::rank(aug, p) == radrank;
    };
    std::vector<long long> x(n, 0);
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= p;
    for (long long code = 1; code < total; ++code) {
        long long c = code;
        IntVector xv(n);
        for (int i = 0; i < n; ++i) {
            xv(i) = c % p;
            c /= p;
        }
        bool all = true;
        for (const auto& g : gens) {
            if (!in_p_ip(ring.multiply(xv, g))) {
                all = false;
                break;
            }
        }
        if (all) return false;
    }
    return true;
}

} // namespace binform::testing
