#pragma once

// Local computations mod p^2: the four-way classification of v_p(Delta),
// exhaustive local densities and their closed forms, and truncated Euler
// products for the global densities.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "binform/forms.hpp"
#include "binform/scalar.hpp"

namespace binform {

// A binary form with coefficients reduced mod p^2, each in [0, p^2).
struct ResidueForm {
    std::int64_t p = 0;
    std::vector<std::int64_t> coeffs;

    ResidueForm() = default;
    ResidueForm(std::int64_t p, std::vector<std::int64_t> coeffs);
    static ResidueForm of(const BinaryForm& f, std::int64_t p);
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

enum class DiscClass { UnitDisc, ExactlyP, WeakP2, StrongP2 };
const char* to_string(DiscClass c);

// Delta of the centered integer lift of the residues, reduced mod `modulus`.
std::int64_t disc_mod(const std::vector<std::int64_t>& coeffs, std::int64_t modulus);

// Whether the reduction mod p has a cube of a linear factor or the square of
// a factor of degree at least 2 (the zero form counts). Coefficients are
// taken mod p; the y-power is included.
bool has_strong_pattern(const std::vector<std::int64_t>& coeffs, std::int64_t p);

DiscClass classify(const ResidueForm& f);
// Same on raw residues without validation; for the enumeration kernels.
DiscClass classify_residues(const std::vector<std::int64_t>& coeffs, std::int64_t p);

struct LocalDensityReport {
    std::string kind;  // "alpha", "beta", "nu0", "nu1"
    int n = 0;
    std::int64_t p = 0;
    Rational density;
    Integer sample_space;
    std::uint64_t favorable = 0;
    std::array<std::uint64_t, 4> class_counts{};  // indexed by DiscClass
};

struct EnumerationOptions {
    std::uint64_t budget = 200000000;  // residue vectors
    int threads = 1;
};

LocalDensityReport alpha_exact(int n, std::int64_t p, const EnumerationOptions& options = {});
LocalDensityReport beta_exact(int n, std::int64_t p, const EnumerationOptions& options = {});
// Density among monic residues of v_p(Delta) = j, for j in {0, 1}.
LocalDensityReport nu_exact(int n, std::int64_t p, int j, const EnumerationOptions& options = {});

// `stated` evaluates the closed forms as published. Enumeration shows the
// published nu_1 for n >= 4 has exponent -n where 2 - n is needed, and the
// n = 4 case of alpha inherits it; `corrected` uses the exponent 2 - n,
// which makes alpha_4 coincide with the n >= 5 expression.
enum class ClosedForm { stated, corrected };
const char* to_string(ClosedForm v);

Rational alpha_formula(int n, std::int64_t p, ClosedForm variant = ClosedForm::stated);
Rational beta_formula(int n, std::int64_t p);
Rational nu_formula(int n, std::int64_t p, int j, ClosedForm variant = ClosedForm::stated);

// Sampling fallback when the exhaustive count is over budget.
struct MonteCarloEstimate {
    double value = 0;
    double std_error = 0;
    std::uint64_t samples = 0;
};
MonteCarloEstimate alpha_monte_carlo(int n, std::int64_t p, std::uint64_t samples, std::uint64_t seed);
MonteCarloEstimate beta_monte_carlo(int n, std::int64_t p, std::uint64_t samples, std::uint64_t seed);

enum class ConstantKind { squarefree, maximal };

struct EulerProduct {
    std::string value;  // decimal, 30 significant digits
    double value_approx = 0;
    double tail_bound = 0;  // |full product - value| <= tail_bound
    std::uint64_t prime_bound = 0;
    std::uint64_t primes_used = 0;
};

// Product of the local factors alpha_n(p) (squarefree) or beta_n(p)
// (maximal) over p <= prime_bound, with a rigorous bound on the tail.
EulerProduct euler_product_truncated(ConstantKind kind, int n, std::uint64_t prime_bound);

} // namespace binform
