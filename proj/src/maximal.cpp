// Maximality of R_f at a prime, decided from f mod p^2.

#include "binform/forms.hpp"
#include "binform/poly.hpp"

namespace binform {

namespace {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t q) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % q);
}

// Dedekind criterion for a monic polynomial given mod p^2 (low degree first).
bool dedekind_maximal(const fp::Poly& monic_f, std::int64_t p) {
    const std::int64_t q = p * p;
    fp::Poly fbar = fp::reduce(monic_f, p);
    fp::Poly radical{1};
    for (const auto& [s, e] : fp::squarefree_decomposition(fbar, p)) radical = fp::mul(radical, s, p);
    fp::Poly cofactor = fp::exact_quotient(fbar, radical, p);
    if (fp::degree(cofactor) == 0) return true;
    // (g* h* - f) / p with g*, h* the lifts with coefficients in [0, p).
    fp::Poly diff = fp::sub(fp::mul(radical, cofactor, q), monic_f, q);
    fp::Poly d;
    for (auto c : diff) {
        if (c % p != 0) throw Error(ErrorKind::VerificationFailed, "Dedekind lift is not congruent mod p");
        d.push_back(c / p);
    }
    fp::trim(d);
    fp::Poly g = fp::gcd(radical, cofactor, p);
    if (!d.empty()) g = fp::gcd(g, d, p);
    return fp::degree(g) == 0;
}

} // namespace

bool maximal_at_p_residue(const std::vector<std::int64_t>& input, std::int64_t p) {
    const std::int64_t q = p * p;
    const int n = static_cast<int>(input.size()) - 1;
    std::vector<std::int64_t> a(input.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = mod(input[i], q);
    int k = 0;
    while (k <= n && a[k] % p == 0) ++k;
    if (k > n) return false;  // p divides every coefficient
    // In the chart P(y) = f(1, y) the root y = 0 of multiplicity k splits off
    // as H1 with H1 = y^k mod p; its part is maximal iff k <= 1 or p^2 does not
    // divide H1(0), and H1(0) = a_0 / a_k mod p^2.
    if (k >= 2 && a[0] == 0) return false;
    // H2 = (a_k + a_{k+1} y + ...) corrected by p * tau, where
    // y^k tau + sigma H2 = E mod p and E = (a_0 + ... + a_{k-1} y^{k-1}) / p.
    fp::Poly h2(a.begin() + k, a.end());
    if (k > 0) {
        fp::Poly e(k);
        for (int i = 0; i < k; ++i) e[i] = a[i] / p;
        fp::Poly h2bar = fp::reduce(h2, p);
        // sigma = E * H2^{-1} mod y^k, by power series division.
        std::int64_t inv0 = inv_mod(h2bar[0], p);
        fp::Poly sigma(k, 0);
        for (int i = 0; i < k; ++i) {
            std::int64_t acc = e[i];
            for (int j = 1; j <= i && j < static_cast<int>(h2bar.size()); ++j) acc -= sigma[i - j] * h2bar[j] % p;
            sigma[i] = mod(mod(acc, p) * inv0, p);
        }
        fp::Poly rest = fp::sub(fp::reduce(e, p), fp::mul(sigma, h2bar, p), p);
        for (int i = 0; i < static_cast<int>(rest.size()); ++i) {
            if (i < k && rest[i] != 0) throw Error(ErrorKind::VerificationFailed, "Hensel step is inconsistent");
            if (i >= k) {
                std::size_t idx = static_cast<std::size_t>(i - k);
                if (idx >= h2.size()) h2.resize(idx + 1, 0);
                h2[idx] = mod(h2[idx] + p * rest[i], q);
            }
        }
    }
    const int d = n - k;
    if (d <= 1) return true;
    // h2(x, 1) has coefficient H2_{d-j} at x^j; the leading one is a unit.
    fp::Poly f2(d + 1, 0);
    for (int j = 0; j <= d; ++j) {
        std::size_t idx = static_cast<std::size_t>(d - j);
        f2[j] = idx < h2.size() ? h2[idx] : 0;
    }
    std::int64_t lead_inv = inv_mod(f2[d], q);
    for (auto& c : f2) c = mulmod(c, lead_inv, q);
    return dedekind_maximal(f2, p);
}

bool is_maximal_at_p(const BinaryForm& f, std::uint64_t p) {
    if (!is_prime_u64(p)) throw Error(ErrorKind::InvalidPrime, std::to_string(p) + " is not prime");
    if (p >= (1ull << 31)) throw Error(ErrorKind::ContractViolation, "prime too large for the mod p^2 kernel");
    const auto pp = static_cast<std::int64_t>(p);
    Integer q = Integer(pp) * pp;
    std::vector<std::int64_t> residues;
    for (const auto& c : f.coeffs()) residues.push_back(static_cast<std::int64_t>(mod(c, q)));
    return maximal_at_p_residue(residues, pp);
}

Tristate is_maximal(const BinaryForm& f, const FactorBudget& budget) {
    Integer disc = discriminant(f);
    if (disc == 0) throw Error(ErrorKind::DegenerateForm, "discriminant vanishes");
    bool complete = true;
    auto primes = square_divisor_primes(disc, budget, complete);
    for (const auto& p : primes) {
        if (p >= Integer(1ull << 31)) return Tristate::unknown;
        if (!is_maximal_at_p(f, static_cast<std::uint64_t>(p))) return Tristate::no;
    }
    return complete ? Tristate::yes : Tristate::unknown;
}

} // namespace binform
