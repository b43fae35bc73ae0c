#pragma once

// Integer factorization with an explicit budget. Results that could not be
// completed inside the budget say so instead of guessing.

#include <cstdint>
#include <utility>
#include <vector>

#include "binform/scalar.hpp"

namespace binform {

struct FactorBudget {
    std::uint64_t trial_bound = 1000000;
    std::uint64_t rho_iterations = 1u << 20;
    int rho_restarts = 8;
};

struct Factorization {
    std::vector<std::pair<Integer, int>> factors;  // sorted by prime
    Integer unfactored = 1;  // composite remainder left when the budget ran out
    bool complete() const { return unfactored == 1; }
};

bool is_prime_u64(std::uint64_t n);
bool is_probable_prime(const Integer& n);

// Primes up to bound, computed once and cached.
const std::vector<std::uint32_t>& small_primes(std::uint32_t bound = 1000000);

Factorization factor(const Integer& n, const FactorBudget& budget = {});

enum class Tristate { yes, no, unknown };
const char* to_string(Tristate t);

// Primes p with p^2 | n. Sets complete = false when some cofactor could not be
// split far enough to rule out a square factor.
std::vector<Integer> square_divisor_primes(const Integer& n, const FactorBudget& budget, bool& complete);

Tristate is_squarefree(const Integer& n, const FactorBudget& budget = {});

} // namespace binform
