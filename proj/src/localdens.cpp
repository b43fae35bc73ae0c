#include "binform/localdens.hpp"

#include <cmath>
#include <mutex>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "binform/parallel.hpp"
#include "binform/poly.hpp"
#include "binform/rng.hpp"

namespace binform {

ResidueForm::ResidueForm(std::int64_t prime, std::vector<std::int64_t> c) : p(prime), coeffs(std::move(c)) {
    if (!is_prime_u64(static_cast<std::uint64_t>(p))) throw Error(ErrorKind::InvalidPrime, std::to_string(p) + " is not prime");
    if (coeffs.size() < 2) throw Error(ErrorKind::ContractViolation, "a binary form needs degree >= 1");
    for (auto x : coeffs)
        if (x < 0 || x >= p * p) throw Error(ErrorKind::ContractViolation, "residue outside [0, p^2)");
}

ResidueForm ResidueForm::of(const BinaryForm& f, std::int64_t p) {
    std::vector<std::int64_t> c;
    for (const auto& a : f.coeffs()) c.push_back(static_cast<std::int64_t>(mod(a, Integer(p * p))));
    return ResidueForm(p, std::move(c));
}

const char* to_string(DiscClass c) {
    switch (c) {
    case DiscClass::UnitDisc: return "UnitDisc";
    case DiscClass::ExactlyP: return "ExactlyP";
    case DiscClass::WeakP2: return "WeakP2";
    case DiscClass::StrongP2: return "StrongP2";
    }
    return "?";
}

std::int64_t disc_mod(const std::vector<std::int64_t>& coeffs, std::int64_t modulus) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<__int128> c(coeffs.size());
    double top = 1;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        std::int64_t r = mod(coeffs[i], modulus);
        if (2 * r > modulus) r -= modulus;
        c[i] = r;
        top = std::max(top, std::abs(static_cast<double>(r)));
    }
    __int128 d;
    if (n == 2) {
        d = discriminant_quadratic(c[0], c[1], c[2]);
    } else if (n == 3 && top < 1e6) {
        d = discriminant_cubic(c[0], c[1], c[2], c[3]);
    } else {
        // Hadamard bound on the Sylvester minors, with room for the shear
        // used when the leading coefficient vanishes.
        double a = top * (c[0] == 0 ? std::pow(n + 2.0, n) : 1.0);
        double bits = (n - 1) * std::log2(std::sqrt(n + 1.0) * a) + n * std::log2(n * std::sqrt(n * 1.0) * a);
        // Bareiss forms products of two minors before dividing.
        if (bits < 62) {
            d = discriminant_of<__int128>(c);
        } else {
            std::vector<Integer> big(coeffs.size());
            for (std::size_t i = 0; i < c.size(); ++i) big[i] = static_cast<long long>(c[i]);
            return static_cast<std::int64_t>(mod(discriminant_of<Integer>(big), Integer(modulus)));
        }
    }
    __int128 r = d % modulus;
    if (r < 0) r += modulus;
    return static_cast<std::int64_t>(r);
}

bool has_strong_pattern(const std::vector<std::int64_t>& coeffs, std::int64_t p) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    int k = 0;
    while (k <= n && mod(coeffs[k], p) == 0) ++k;
    if (k > n) return true;
    // k is the multiplicity of the root at infinity (the y^k factor).
    if (k >= 3) return true;
    int repeated_degree = k >= 2 ? 1 : 0;
    fp::Poly dehom(static_cast<std::size_t>(n - k + 1));
    for (int j = 0; j <= n - k; ++j) dehom[j] = mod(coeffs[n - j], p);
    if (n - k >= 2) {
        for (const auto& [factor, e] : fp::squarefree_decomposition(dehom, p)) {
            if (e < 2) continue;
            if (e >= 3) return true;
            repeated_degree += fp::degree(factor);
        }
    }
    return repeated_degree >= 2;
}

DiscClass classify_residues(const std::vector<std::int64_t>& coeffs, std::int64_t p) {
    const std::int64_t q = p * p;
    std::int64_t d = disc_mod(coeffs, q);
    if (d % p != 0) return DiscClass::UnitDisc;
    if (d != 0) return DiscClass::ExactlyP;
    // Over F_2 every discriminant is 0 or 1 mod 4, so 2 | Delta already forces
    // 4 | Delta(f + 2g) for every g.
    if (p == 2) return DiscClass::StrongP2;
    return has_strong_pattern(coeffs, p) ? DiscClass::StrongP2 : DiscClass::WeakP2;
}

DiscClass classify(const ResidueForm& f) { return classify_residues(f.coeffs, f.p); }

namespace {

std::uint64_t checked_space(int free_coeffs, std::int64_t q, const EnumerationOptions& options) {
    if (free_coeffs < 1) throw Error(ErrorKind::ContractViolation, "nothing to enumerate");
    double size = std::pow(static_cast<double>(q), free_coeffs);
    if (size > static_cast<double>(options.budget))
        throw Error(ErrorKind::BudgetExceeded, "enumeration of " + std::to_string(size) + " residue vectors exceeds budget " +
                                                   std::to_string(options.budget));
    std::uint64_t s = 1;
    for (int i = 0; i < free_coeffs; ++i) s *= static_cast<std::uint64_t>(q);
    return s;
}

void check_args(int n, std::int64_t p) {
    if (n < 1) throw Error(ErrorKind::ContractViolation, "degree must be at least 1");
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p))) throw Error(ErrorKind::InvalidPrime, std::to_string(p) + " is not prime");
    if (p > 46340) throw Error(ErrorKind::ContractViolation, "prime too large for enumeration");
}

struct Tally {
    std::uint64_t favorable = 0;
    std::array<std::uint64_t, 4> classes{};
};

// Enumerates residue vectors (a_0, ..., a_n) mod p^2 with the first `fixed`
// coefficients set to `prefix`, sharded over the next coefficient.
template <typename Predicate>
LocalDensityReport enumerate(const std::string& kind, int n, std::int64_t p, const std::vector<std::int64_t>& prefix,
                             const EnumerationOptions& options, Predicate favorable) {
    const std::int64_t q = p * p;
    const int fixed = static_cast<int>(prefix.size());
    const int free_coeffs = n + 1 - fixed;
    std::uint64_t space = checked_space(free_coeffs, q, options);
    std::vector<Tally> tallies(static_cast<std::size_t>(q));
    run_shards(q, options.threads, [&](std::int64_t shard) {
        std::vector<std::int64_t> c(prefix);
        c.resize(n + 1, 0);
        c[fixed] = shard;
        Tally& t = tallies[static_cast<std::size_t>(shard)];
        while (true) {
            DiscClass cls = classify_residues(c, p);
            ++t.classes[static_cast<int>(cls)];
            if (favorable(c, cls)) ++t.favorable;
            int i = n;
            while (i > fixed && c[i] == q - 1) c[i--] = 0;
            if (i == fixed) break;
            ++c[i];
        }
    });
    LocalDensityReport report;
    report.kind = kind;
    report.n = n;
    report.p = p;
    report.sample_space = space;
    for (const auto& t : tallies) {
        report.favorable += t.favorable;
        for (int k = 0; k < 4; ++k) report.class_counts[k] += t.classes[k];
    }
    report.density = Rational(Integer(report.favorable), Integer(space));
    return report;
}

} // namespace

LocalDensityReport alpha_exact(int n, std::int64_t p, const EnumerationOptions& options) {
    check_args(n, p);
    return enumerate("alpha", n, p, {}, options, [](const std::vector<std::int64_t>&, DiscClass cls) {
        return cls == DiscClass::UnitDisc || cls == DiscClass::ExactlyP;
    });
}

LocalDensityReport beta_exact(int n, std::int64_t p, const EnumerationOptions& options) {
    check_args(n, p);
    return enumerate("beta", n, p, {}, options,
                     [p](const std::vector<std::int64_t>& c, DiscClass) { return maximal_at_p_residue(c, p); });
}

LocalDensityReport nu_exact(int n, std::int64_t p, int j, const EnumerationOptions& options) {
    check_args(n, p);
    if (j != 0 && j != 1) throw Error(ErrorKind::ContractViolation, "nu is computed for j in {0, 1}");
    DiscClass target = j == 0 ? DiscClass::UnitDisc : DiscClass::ExactlyP;
    if (n == 1) {
        // Monic linear polynomials have discriminant 1.
        LocalDensityReport r;
        r.kind = j == 0 ? "nu0" : "nu1";
        r.n = n;
        r.p = p;
        r.sample_space = p * p;
        r.favorable = j == 0 ? static_cast<std::uint64_t>(p * p) : 0;
        r.class_counts[0] = static_cast<std::uint64_t>(p * p);
        r.density = Rational(Integer(r.favorable), r.sample_space);
        return r;
    }
    return enumerate(j == 0 ? "nu0" : "nu1", n, p, {1}, options,
                     [target](const std::vector<std::int64_t>&, DiscClass cls) { return cls == target; });
}

namespace {

// Polynomials in u = 1/p with rational coefficients, low degree first.
using UPoly = std::vector<Rational>;

UPoly operator*(const UPoly& a, const UPoly& b) {
    UPoly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

UPoly upoly(std::initializer_list<long long> c) {
    UPoly out;
    for (long long x : c) out.emplace_back(x);
    return out;
}

// The odd-prime local factors as polynomials in u.
UPoly alpha_poly(int n, ClosedForm variant) {
    const UPoly one_minus = upoly({1, -1});
    if (variant == ClosedForm::corrected && n == 4) n = 5;
    switch (n) {
    case 2: return one_minus * upoly({1, 1, 0, -1});
    case 3: return one_minus * one_minus * upoly({1, 1}) * upoly({1, 1});
    case 4: return one_minus * one_minus * upoly({1, 2, 0, 0, -2, 1});
    default: return one_minus * one_minus * upoly({1, 1}) * upoly({1, 1, -1});
    }
}

UPoly beta_poly(int n) {
    if (n == 2) return upoly({1, -1}) * upoly({1, 1, 0, -1});
    return upoly({1, 0, -1}) * upoly({1, 0, 0, -1});
}

Rational evaluate(const UPoly& f, std::int64_t p) {
    Rational u(Integer(1), Integer(p)), acc = 0, power = 1;
    for (const auto& c : f) {
        acc += c * power;
        power *= u;
    }
    return acc;
}

} // namespace

const char* to_string(ClosedForm v) { return v == ClosedForm::stated ? "stated" : "corrected"; }

Rational alpha_formula(int n, std::int64_t p, ClosedForm variant) {
    check_args(n, p);
    if (n < 2) throw Error(ErrorKind::ContractViolation, "alpha is defined for n >= 2");
    if (p == 2) return n == 2 ? Rational(1, 2) : Rational(3, 8);
    return evaluate(alpha_poly(n, variant), p);
}

Rational beta_formula(int n, std::int64_t p) {
    check_args(n, p);
    if (n < 2) throw Error(ErrorKind::ContractViolation, "beta is defined for n >= 2");
    return evaluate(beta_poly(n), p);
}

Rational nu_formula(int n, std::int64_t p, int j, ClosedForm variant) {
    check_args(n, p);
    Rational u(Integer(1), Integer(p));
    if (j == 0) return n == 1 ? Rational(1) : Rational(1) - u;
    if (j != 1) throw Error(ErrorKind::ContractViolation, "nu is computed for j in {0, 1}");
    if (p == 2 || n == 1) return 0;
    if (n == 2) return u * (1 - u);
    if (n == 3) return u * (1 - u) * (1 - u);
    Rational minus_u_pow = 1;
    const int exponent = variant == ClosedForm::stated ? n : n - 2;
    for (int i = 0; i < exponent; ++i) minus_u_pow *= -u;
    return (1 - u) * (1 - u) * (1 - minus_u_pow) / Rational(p + 1);
}

namespace {

MonteCarloEstimate sample(int n, std::int64_t p, std::uint64_t samples, std::uint64_t seed, const char* module,
                          bool maximal) {
    check_args(n, p);
    if (samples == 0) throw Error(ErrorKind::ContractViolation, "no samples requested");
    const std::int64_t q = p * p;
    std::uint64_t hits = 0;
    std::vector<std::int64_t> c(n + 1);
    for (std::uint64_t s = 0; s < samples; ++s) {
        Stream rng(seed, module, s);
        for (auto& x : c) x = rng.uniform(0, q - 1);
        if (maximal) {
            hits += maximal_at_p_residue(c, p);
        } else {
            hits += disc_mod(c, q) != 0;
        }
    }
    MonteCarloEstimate e;
    e.samples = samples;
    e.value = static_cast<double>(hits) / static_cast<double>(samples);
    e.std_error = std::sqrt(e.value * (1 - e.value) / static_cast<double>(samples));
    return e;
}

} // namespace

MonteCarloEstimate alpha_monte_carlo(int n, std::int64_t p, std::uint64_t samples, std::uint64_t seed) {
    return sample(n, p, samples, seed, "localdens.alpha.mc", false);
}

MonteCarloEstimate beta_monte_carlo(int n, std::int64_t p, std::uint64_t samples, std::uint64_t seed) {
    return sample(n, p, samples, seed, "localdens.beta.mc", true);
}

EulerProduct euler_product_truncated(ConstantKind kind, int n, std::uint64_t prime_bound) {
    using Real = boost::multiprecision::cpp_bin_float_50;
    if (n < 2) throw Error(ErrorKind::ContractViolation, "densities are defined for n >= 2");
    if (prime_bound < 2) throw Error(ErrorKind::ContractViolation, "prime bound must be at least 2");
    if (prime_bound > 100000000) throw Error(ErrorKind::BudgetExceeded, "prime bound above 1e8");
    // alpha_n for n >= 5 is unaffected by the nu_1 exponent; use the
    // enumeration-confirmed expression for n = 4 as well.
    UPoly f = kind == ConstantKind::squarefree ? alpha_poly(n, ClosedForm::corrected) : beta_poly(n);
    // Write the factor as 1 - u^2 c(u); bound |c| on [0, 1/P] termwise.
    if (f.size() < 2 || f[0] != 1 || f[1] != 0)
        throw Error(ErrorKind::VerificationFailed, "local factor is not 1 + O(1/p^2)");
    std::vector<double> fd;
    for (const auto& c : f) fd.push_back(static_cast<double>(c));
    double big_c = 0, upow = 1;
    for (std::size_t k = 2; k < f.size(); ++k) {
        big_c += std::abs(fd[k]) * upow;
        upow /= static_cast<double>(prime_bound);
    }

    Real value = 1;
    std::uint64_t used = 0;
    const auto& primes = small_primes(static_cast<std::uint32_t>(std::max<std::uint64_t>(prime_bound, 1000000)));
    for (std::uint32_t p : primes) {
        if (p > prime_bound) break;
        ++used;
        if (p == 2) {
            Rational exact = kind == ConstantKind::squarefree ? alpha_formula(n, 2, ClosedForm::corrected) : beta_formula(n, 2);
            value *= Real(numerator(exact)) / Real(denominator(exact));
            continue;
        }
        Real u = Real(1) / p, acc = 0;
        for (std::size_t k = f.size(); k-- > 0;) acc = acc * u + Real(numerator(f[k])) / Real(denominator(f[k]));
        value *= acc;
    }
    // For p > P each factor is 1 - x_p with |x_p| <= C / p^2 <= C / P^2, and
    // sum_{p > P} 1/p^2 < 1/P; |log(1 - x)| <= |x| / (1 - |x|).
    const double pb = static_cast<double>(prime_bound);
    double log_bound = (big_c / pb) / (1 - big_c / (pb * pb));
    EulerProduct out;
    out.prime_bound = prime_bound;
    out.primes_used = used;
    out.value = value.str(30);
    out.value_approx = static_cast<double>(value);
    out.tail_bound = out.value_approx * std::expm1(log_bound) + 1e-30;
    return out;
}

} // namespace binform
