#include "binform/factor.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>

#include <boost/multiprecision/miller_rabin.hpp>

namespace binform {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

const Integer kU64Max = Integer(std::numeric_limits<std::uint64_t>::max());

Integer isqrt(const Integer& n) { return boost::multiprecision::sqrt(n); }

// Brent's variant of Pollard rho; returns a nontrivial factor or 0.
Integer pollard_brent(const Integer& n, const FactorBudget& budget) {
    if (n % 2 == 0) return 2;
    std::mt19937_64 gen(0x5eed1234u);
    for (int attempt = 0; attempt < budget.rho_restarts; ++attempt) {
        Integer c = Integer(gen() % 1000000 + 1);
        Integer y = Integer(gen()) % n, x, ys, q = 1, g = 1;
        std::uint64_t r = 1, steps = 0;
        const std::uint64_t m = 128;
        while (g == 1 && steps < budget.rho_iterations) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
            std::uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                g = gcd(q, n);
                k += m;
                steps += m;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = (ys * ys + c) % n;
                g = gcd(abs(x - ys), n);
            } while (g == 1);
        }
        if (g != n && g != 1) return g;
    }
    return 0;
}

void add_factor(std::map<Integer, int>& out, const Integer& p, int e) { out[p] += e; }

// Fully factor a cofactor with no prime factors below the trial bound.
void split(const Integer& n, const FactorBudget& budget, std::map<Integer, int>& out, Integer& unfactored) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        add_factor(out, n, 1);
        return;
    }
    Integer s = isqrt(n);
    if (s * s == n) {
        std::map<Integer, int> sub;
        Integer rest = 1;
        split(s, budget, sub, rest);
        for (auto& [p, e] : sub) add_factor(out, p, 2 * e);
        unfactored *= rest * rest;
        return;
    }
    Integer d = pollard_brent(n, budget);
    if (d == 0) {
        unfactored *= n;
        return;
    }
    split(d, budget, out, unfactored);
    split(n / d, budget, out, unfactored);
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool is_probable_prime(const Integer& n) {
    if (n < 2) return false;
    if (n <= kU64Max) return is_prime_u64(static_cast<std::uint64_t>(n));
    std::mt19937_64 gen(0x9e3779b97f4a7c15ull);
    return boost::multiprecision::miller_rabin_test(n, 32, gen);
}

const std::vector<std::uint32_t>& small_primes(std::uint32_t bound) {
    static std::mutex lock;
    static std::vector<std::uint32_t> primes;
    static std::uint32_t computed = 0;
    std::lock_guard<std::mutex> guard(lock);
    if (computed < bound) {
        std::vector<bool> composite(bound + 1, false);
        primes.clear();
        for (std::uint32_t i = 2; i <= bound; ++i) {
            if (composite[i]) continue;
            primes.push_back(i);
            for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= bound; j += i) composite[j] = true;
        }
        computed = bound;
    }
    return primes;
}

Factorization factor(const Integer& input, const FactorBudget& budget) {
    if (input == 0) throw Error(ErrorKind::ContractViolation, "cannot factor zero");
    Integer n = abs(input);
    std::map<Integer, int> found;
    const auto& primes = small_primes(static_cast<std::uint32_t>(std::max<std::uint64_t>(budget.trial_bound, 2)));
    if (n <= kU64Max) {
        auto m = static_cast<std::uint64_t>(n);
        for (std::uint32_t p : primes) {
            if (p > budget.trial_bound || static_cast<std::uint64_t>(p) * p > m) break;
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            if (e) found[Integer(p)] += e;
        }
        n = m;
    } else {
        for (std::uint32_t p : primes) {
            if (p > budget.trial_bound) break;
            if (Integer(p) * p > n) break;
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            if (e) found[Integer(p)] += e;
        }
    }
    Factorization out;
    split(n, budget, found, out.unfactored);
    for (auto& [p, e] : found) out.factors.emplace_back(p, e);
    return out;
}

const char* to_string(Tristate t) {
    switch (t) {
    case Tristate::yes: return "yes";
    case Tristate::no: return "no";
    case Tristate::unknown: return "unknown";
    }
    return "unknown";
}

std::vector<Integer> square_divisor_primes(const Integer& input, const FactorBudget& budget, bool& complete) {
    if (input == 0) throw Error(ErrorKind::ContractViolation, "square divisors of zero");
    complete = true;
    Integer n = abs(input);
    std::vector<Integer> result;
    const auto& primes = small_primes(static_cast<std::uint32_t>(std::max<std::uint64_t>(budget.trial_bound, 2)));
    std::uint64_t last_tried = 1;
    if (n <= kU64Max) {
        auto m = static_cast<std::uint64_t>(n);
        for (std::uint32_t p : primes) {
            if (p > budget.trial_bound) break;
            if (static_cast<std::uint64_t>(p) * p > m) {
                last_tried = m;  // the cofactor is 1 or prime
                break;
            }
            last_tried = p;
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            if (e >= 2) result.emplace_back(p);
        }
        n = m;
    } else {
        for (std::uint32_t p : primes) {
            if (p > budget.trial_bound) break;
            last_tried = p;
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            if (e >= 2) result.emplace_back(p);
        }
    }
    if (n == 1 || is_probable_prime(n)) return result;
    Integer s = isqrt(n);
    if (s * s == n) {
        Factorization fs = factor(s, budget);
        for (auto& [p, e] : fs.factors) result.push_back(p);
        if (!fs.complete()) complete = false;
        std::sort(result.begin(), result.end());
        return result;
    }
    // Every prime factor of n exceeds the trial bound, so a non-square n
    // below bound^3 is a product of two distinct primes.
    Integer b = Integer(std::max<std::uint64_t>(last_tried, 1));
    if (n < b * b * b) return result;
    Factorization f = factor(n, budget);
    for (auto& [p, e] : f.factors)
        if (e >= 2) result.push_back(p);
    if (!f.complete()) complete = false;
    std::sort(result.begin(), result.end());
    return result;
}

Tristate is_squarefree(const Integer& n, const FactorBudget& budget) {
    if (n == 0) return Tristate::no;
    bool complete = true;
    auto sq = square_divisor_primes(n, budget, complete);
    if (!sq.empty()) return Tristate::no;
    return complete ? Tristate::yes : Tristate::unknown;
}

} // namespace binform
