#pragma once

// Univariate polynomials over Z/qZ with small moduli. Coefficients are
// stored low degree first; the zero polynomial is the empty vector.

#include <cstdint>
#include <utility>
#include <vector>

namespace binform::fp {

using Poly = std::vector<std::int64_t>;

void trim(Poly& f);
int degree(const Poly& f);
Poly reduce(Poly f, std::int64_t q);
Poly add(const Poly& a, const Poly& b, std::int64_t q);
Poly sub(const Poly& a, const Poly& b, std::int64_t q);
Poly mul(const Poly& a, const Poly& b, std::int64_t q);
Poly scale(const Poly& a, std::int64_t c, std::int64_t q);
Poly derivative(const Poly& f, std::int64_t q);

// Division with remainder; the leading coefficient of b must be a unit mod q.
std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b, std::int64_t q);
Poly rem(const Poly& a, const Poly& b, std::int64_t q);
Poly exact_quotient(const Poly& a, const Poly& b, std::int64_t q);

// Monic gcd over the prime field F_p.
Poly gcd(const Poly& a, const Poly& b, std::int64_t p);
Poly monic(const Poly& f, std::int64_t q);
bool is_one(const Poly& f);

// base^e mod (modulus, p).
Poly powmod(const Poly& base, std::uint64_t e, const Poly& modulus, std::int64_t p);

// Squarefree decomposition over F_p of a nonzero polynomial:
// f = c * prod s_e^e with s_e squarefree, pairwise coprime, monic.
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& f, std::int64_t p);

// Distinct-degree factorization of a monic squarefree polynomial over F_p:
// returns (d, product of all irreducible factors of degree d).
std::vector<std::pair<int, Poly>> distinct_degree(const Poly& f, std::int64_t p);

// Multiset of irreducible factor degrees of a squarefree polynomial over F_p.
std::vector<int> degree_pattern(const Poly& f, std::int64_t p);

} // namespace binform::fp
