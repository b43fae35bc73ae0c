#pragma once

// Census experiments over height boxes |a_i| <= X: squarefree and maximal
// densities (optionally under local conditions mod p^2), counts of the sets
// W_m split by strong and weak divisibility, and the field miner.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "binform/factor.hpp"
#include "binform/forms.hpp"
#include "binform/localdens.hpp"

namespace binform {

enum class CensusKind { squarefree, maximal };
const char* to_string(CensusKind k);

// A subset of forms mod p^2, given as a predicate on residues in [0, p^2).
struct SigmaCondition {
    std::int64_t p = 0;
    std::string name;
    std::function<bool(const std::vector<std::int64_t>&)> allowed;

    // Explicit list of allowed residue vectors a_0..a_n.
    static SigmaCondition from_residues(std::int64_t p, std::vector<std::vector<std::int64_t>> residues,
                                        std::string name = "list");
    // a_0 not divisible by p.
    static SigmaCondition leading_unit(std::int64_t p);
};

struct CensusConfig {
    int n = 2;
    std::int64_t X = 1;
    bool strict_height = false;  // |a_i| < X instead of <= X
    std::vector<SigmaCondition> sigma;
    std::int64_t shards = 1;
    int threads = 1;
    std::uint64_t budget = std::uint64_t(1) << 34;  // forms in the box
    std::uint64_t samples = 0;  // > 0: uniform sampling instead of the full box
    std::uint64_t seed = 0;
    FactorBudget factor_budget;
    std::uint64_t prime_bound = 100000;  // Euler product truncation
};

struct ShardRecord {
    std::int64_t shard = 0;
    std::uint64_t total = 0, favorable = 0, unfavorable = 0, unknown = 0;
};

struct CensusResult {
    CensusKind kind = CensusKind::squarefree;
    int n = 0;
    std::int64_t X = 0;
    bool strict_height = false;
    bool sampled = false;
    std::uint64_t total = 0, favorable = 0, unfavorable = 0, unknown = 0;
    std::uint64_t zero_disc = 0;   // counted as unfavorable
    std::uint64_t sigma_pass = 0;  // forms meeting every local condition
    double empirical = 0;          // favorable / total
    // Truncated Euler product, times the local factors of the conditions.
    std::string reference_value;
    double reference = 0;
    double reference_tail = 0;
    Rational sigma_factor = 1;
    std::vector<ShardRecord> shards;
};

CensusResult run_census(CensusKind kind, const CensusConfig& cfg);
inline CensusResult squarefree_disc_census(const CensusConfig& cfg) { return run_census(CensusKind::squarefree, cfg); }
inline CensusResult maximal_census(const CensusConfig& cfg) { return run_census(CensusKind::maximal, cfg); }

// Density mod p^2 of residues meeting the condition and favorable at p,
// divided by the density of residues favorable at p.
Rational sigma_local_ratio(CensusKind kind, int n, const SigmaCondition& condition);

// Primes p with p^2 | v, exact for 0 < v < 10^18 by trial division up to
// the cube root and a square test on the cofactor.
std::vector<std::uint64_t> square_primes_small(std::uint64_t v);

struct WmRow {
    std::int64_t m = 1;
    std::uint64_t strong = 0;     // StrongP2 at every p | m
    std::uint64_t weak = 0;       // WeakP2 at every p | m
    std::uint64_t divisible = 0;  // m^2 | Delta
};

struct WmCensus {
    int n = 0;
    std::int64_t X = 0;
    std::uint64_t total = 0, zero_disc = 0;  // rows count forms with Delta != 0 only
    Integer max_abs_disc = 0;
    std::vector<WmRow> rows;  // squarefree m = 1..m_max
};

WmCensus wm_tail_census(int n, std::int64_t X, std::int64_t m_max, bool strict_height = false, int threads = 1);

struct InclusionExclusion {
    std::uint64_t direct = 0;  // Delta != 0 and squarefree
    Integer signed_sum = 0;    // sum_m mu(m) #{Delta != 0, m^2 | Delta}
    std::int64_t m_max = 0;
    bool equal() const { return signed_sum == Integer(direct); }
};
// m runs up to max |Delta| over the box.
InclusionExclusion inclusion_exclusion_check(int n, std::int64_t X);

struct MinerOptions {
    bool require_sn = false;
    int sn_prime_budget = 60;
    int digits = 50, max_digits = 200;
    int threads = 1;
    bool inject_duplicate = false;  // audit self-test
};

struct MinerAudit {
    bool passed = false;
    std::uint64_t pairs = 0;
    std::uint64_t identical_pairs = 0;  // failures
    std::uint64_t twin_pairs = 0;       // related by a diagonal sign matrix
    std::uint64_t distinct_pairs = 0;   // different twin classes
    std::uint64_t recheck_failures = 0;
    std::vector<std::string> notes;
};

struct MinerResult {
    int n = 0;
    std::int64_t X = 0;
    std::vector<BinaryForm> accepted;
    std::uint64_t scanned = 0, squarefree = 0, dropped_uncertain = 0, rejected_sn = 0;
    std::vector<std::vector<std::size_t>> twin_classes;
    std::uint64_t distinct_field_lower_bound = 0;  // number of twin classes
    MinerAudit audit;
};

// Forms of the box with a_0 != 0, squarefree discriminant and a certified
// unique reduced basis; uncertain verdicts are dropped.
MinerResult field_miner(int n, std::int64_t X, const MinerOptions& options = {});

// Forms related to f by diag(+-1, +-1) under f -> det(g)^{-1} f((x, y) g);
// their rings are isomorphic.
std::vector<BinaryForm> sign_twins(const BinaryForm& f);

} // namespace binform
