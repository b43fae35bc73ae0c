#include "binform/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "binform/parallel.hpp"
#include "binform/rng.hpp"

namespace binform {

const char* to_string(CensusKind k) { return k == CensusKind::squarefree ? "squarefree" : "maximal"; }

SigmaCondition SigmaCondition::from_residues(std::int64_t p, std::vector<std::vector<std::int64_t>> residues,
                                             std::string name) {
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p))) throw Error(ErrorKind::InvalidPrime, "condition prime");
    const std::int64_t q = p * p;
    for (auto& r : residues)
        for (auto& x : r) x = mod(x, q);
    std::set<std::vector<std::int64_t>> set(residues.begin(), residues.end());
    SigmaCondition c;
    c.p = p;
    c.name = std::move(name);
    c.allowed = [set = std::move(set)](const std::vector<std::int64_t>& r) { return set.count(r) > 0; };
    return c;
}

SigmaCondition SigmaCondition::leading_unit(std::int64_t p) {
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p))) throw Error(ErrorKind::InvalidPrime, "condition prime");
    SigmaCondition c;
    c.p = p;
    c.name = "a0-unit";
    c.allowed = [p](const std::vector<std::int64_t>& r) { return r[0] % p != 0; };
    return c;
}

std::vector<std::uint64_t> square_primes_small(std::uint64_t v) {
    if (v == 0 || v >= 1000000000000000000ull) throw Error(ErrorKind::ContractViolation, "value out of range");
    std::vector<std::uint64_t> out;
    std::uint64_t c = v;
    for (std::uint32_t p32 : small_primes()) {
        const std::uint64_t p = p32;
        if (p * p > c) break;
        if (p * p * p > c) {
            // every prime factor of c is >= p, so c has at most two of them
            auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(c)));
            while (s * s > c) --s;
            while ((s + 1) * (s + 1) <= c) ++s;
            if (s * s == c) out.push_back(s);
            return out;
        }
        if (c % p) continue;
        int e = 0;
        while (c % p == 0) {
            c /= p;
            ++e;
        }
        if (e >= 2) out.push_back(p);
    }
    return out;
}

namespace {

using i128 = __int128;

// Upper bound for |Delta| on the box, when a closed form is used.
double disc_bound(int n, std::int64_t X) {
    double x = static_cast<double>(X);
    if (n == 2) return 5 * x * x;
    if (n == 3) return 54 * x * x * x * x;
    return INFINITY;
}

class SquarefreeTable {
public:
    explicit SquarefreeTable(std::uint64_t size) : bits_(size, true) {
        if (size == 0) return;
        bits_[0] = false;
        for (std::uint32_t p : small_primes()) {
            const std::uint64_t q = std::uint64_t(p) * p;
            if (q >= size) break;
            for (std::uint64_t k = q; k < size; k += q) bits_[k] = false;
        }
    }
    std::uint64_t size() const { return bits_.size(); }
    bool operator[](std::uint64_t v) const { return bits_[v]; }

private:
    std::vector<bool> bits_;
};

enum class Verdict { favorable, unfavorable, unknown };

struct Evaluator {
    CensusKind kind;
    int n;
    const SquarefreeTable* table;
    const std::vector<SigmaCondition>* sigma;
    FactorBudget budget;

    // Delta as Integer, with fast paths for n = 2, 3.
    Integer disc(const std::vector<std::int64_t>& a) const {
        if (n == 2) return Integer(static_cast<long long>(a[1] * a[1] - 4 * a[0] * a[2]));
        if (n == 3) {
            i128 d = discriminant_cubic<i128>(a[0], a[1], a[2], a[3]);
            return Integer(static_cast<long long>(d));
        }
        std::vector<Integer> c(a.begin(), a.end());
        return discriminant(BinaryForm(c));
    }

    bool sigma_ok(const std::vector<std::int64_t>& a, std::vector<std::int64_t>& scratch) const {
        for (const auto& cond : *sigma) {
            const std::int64_t q = cond.p * cond.p;
            scratch.resize(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) scratch[i] = mod(a[i], q);
            if (!cond.allowed(scratch)) return false;
        }
        return true;
    }

    Verdict evaluate(const std::vector<std::int64_t>& a, bool& zero, std::vector<std::int64_t>& scratch) const {
        zero = false;
        Integer d = disc(a);
        if (d == 0) {
            zero = true;
            return Verdict::unfavorable;
        }
        Integer ad = abs(d);
        std::vector<Integer> square_primes;
        bool complete = true;
        if (ad < Integer(table->size())) {
            if ((*table)[ad.convert_to<std::uint64_t>()]) return Verdict::favorable;
            if (kind == CensusKind::squarefree) return Verdict::unfavorable;
            for (auto p : square_primes_small(ad.convert_to<std::uint64_t>())) square_primes.emplace_back(p);
        } else if (ad < Integer(1000000000000000000ull)) {
            for (auto p : square_primes_small(ad.convert_to<std::uint64_t>())) square_primes.emplace_back(p);
        } else {
            square_primes = square_divisor_primes(ad, budget, complete);
        }
        if (kind == CensusKind::squarefree) {
            if (!square_primes.empty()) return Verdict::unfavorable;
            return complete ? Verdict::favorable : Verdict::unknown;
        }
        for (const auto& P : square_primes) {
            if (P >= Integer(1ll << 31)) return Verdict::unknown;
            const std::int64_t p = P.convert_to<std::int64_t>(), q = p * p;
            scratch.resize(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) scratch[i] = mod(a[i], q);
            if (!maximal_at_p_residue(scratch, p)) return Verdict::unfavorable;
        }
        return complete ? Verdict::favorable : Verdict::unknown;
    }
};

struct BoxShape {
    int n;
    std::int64_t radius;  // |a_i| <= radius
    std::uint64_t width() const { return static_cast<std::uint64_t>(2 * radius + 1); }
    std::uint64_t size() const {
        double v = std::pow(static_cast<double>(width()), n + 1);
        if (v > 1.8e19) throw Error(ErrorKind::BudgetExceeded, "box too large");
        std::uint64_t s = 1;
        for (int i = 0; i <= n; ++i) s *= width();
        return s;
    }
    // a_0 is the most significant digit.
    void decode(std::uint64_t index, std::vector<std::int64_t>& a) const {
        a.resize(n + 1);
        for (int i = n; i >= 0; --i) {
            a[i] = static_cast<std::int64_t>(index % width()) - radius;
            index /= width();
        }
    }
    void increment(std::vector<std::int64_t>& a) const {
        for (int i = n; i >= 0; --i) {
            if (a[i] < radius) {
                ++a[i];
                return;
            }
            a[i] = -radius;
        }
    }
};

std::uint64_t table_size_for(int n, std::int64_t X) {
    double b = disc_bound(n, X);
    if (!(b < 2e8)) return 0;
    return static_cast<std::uint64_t>(b) + 1;
}

} // namespace

Rational sigma_local_ratio(CensusKind kind, int n, const SigmaCondition& condition) {
    const std::int64_t p = condition.p, q = p * p;
    double size = std::pow(static_cast<double>(q), n + 1);
    if (size > 1e8) throw Error(ErrorKind::BudgetExceeded, "local enumeration over budget");
    std::vector<std::int64_t> a(n + 1, 0);
    std::uint64_t favorable = 0, both = 0;
    while (true) {
        bool fav = kind == CensusKind::squarefree ? disc_mod(a, q) != 0 : maximal_at_p_residue(a, p);
        if (fav) {
            ++favorable;
            if (condition.allowed(a)) ++both;
        }
        int i = n;
        while (i >= 0 && a[i] == q - 1) a[i--] = 0;
        if (i < 0) break;
        ++a[i];
    }
    return Rational(Integer(both), Integer(favorable));
}

CensusResult run_census(CensusKind kind, const CensusConfig& cfg) {
    if (cfg.n < 2) throw Error(ErrorKind::ContractViolation, "census needs n >= 2");
    if (cfg.X < 1) throw Error(ErrorKind::ContractViolation, "census needs X >= 1");
    if (cfg.shards < 1) throw Error(ErrorKind::ContractViolation, "census needs at least one shard");
    {
        std::set<std::int64_t> primes;
        for (const auto& c : cfg.sigma)
            if (!primes.insert(c.p).second) throw Error(ErrorKind::ContractViolation, "condition primes must differ");
    }
    BoxShape box{cfg.n, cfg.strict_height ? cfg.X - 1 : cfg.X};
    CensusResult res;
    res.kind = kind;
    res.n = cfg.n;
    res.X = cfg.X;
    res.strict_height = cfg.strict_height;
    res.sampled = cfg.samples > 0;
    const std::uint64_t total = res.sampled ? cfg.samples : box.size();
    if (total > cfg.budget) throw Error(ErrorKind::BudgetExceeded, "census over budget");

    SquarefreeTable table(table_size_for(cfg.n, box.radius));
    Evaluator ev{kind, cfg.n, &table, &cfg.sigma, cfg.factor_budget};
    std::vector<ShardRecord> records(static_cast<std::size_t>(cfg.shards));
    std::vector<std::uint64_t> zero(records.size(), 0), pass(records.size(), 0);
    run_shards(cfg.shards, cfg.threads, [&](std::int64_t shard) {
        Block blk = shard_block(static_cast<std::int64_t>(total), cfg.shards, shard);
        ShardRecord rec;
        rec.shard = shard;
        std::vector<std::int64_t> a, scratch;
        if (!res.sampled && blk.begin < blk.end) box.decode(static_cast<std::uint64_t>(blk.begin), a);
        for (std::int64_t i = blk.begin; i < blk.end; ++i) {
            if (res.sampled) {
                Stream rng(cfg.seed, "sieve.sample", static_cast<std::uint64_t>(i));
                a.resize(cfg.n + 1);
                for (auto& x : a) x = rng.uniform(-box.radius, box.radius);
            } else if (i > blk.begin) {
                box.increment(a);
            }
            ++rec.total;
            if (!ev.sigma_ok(a, scratch)) {
                ++rec.unfavorable;
                continue;
            }
            ++pass[static_cast<std::size_t>(shard)];
            bool z = false;
            switch (ev.evaluate(a, z, scratch)) {
            case Verdict::favorable: ++rec.favorable; break;
            case Verdict::unfavorable: ++rec.unfavorable; break;
            case Verdict::unknown: ++rec.unknown; break;
            }
            if (z) ++zero[static_cast<std::size_t>(shard)];
        }
        records[static_cast<std::size_t>(shard)] = rec;
    });
    for (std::size_t s = 0; s < records.size(); ++s) {
        res.total += records[s].total;
        res.favorable += records[s].favorable;
        res.unfavorable += records[s].unfavorable;
        res.unknown += records[s].unknown;
        res.zero_disc += zero[s];
        res.sigma_pass += pass[s];
    }
    res.shards = std::move(records);
    res.empirical = res.total ? static_cast<double>(res.favorable) / static_cast<double>(res.total) : 0.0;

    EulerProduct e = euler_product_truncated(
        kind == CensusKind::squarefree ? ConstantKind::squarefree : ConstantKind::maximal, cfg.n, cfg.prime_bound);
    for (const auto& c : cfg.sigma) res.sigma_factor *= sigma_local_ratio(kind, cfg.n, c);
    double factor = res.sigma_factor.convert_to<double>();
    res.reference = e.value_approx * factor;
    res.reference_tail = e.tail_bound * factor;
    res.reference_value = cfg.sigma.empty() ? e.value : std::to_string(res.reference);
    return res;
}

WmCensus wm_tail_census(int n, std::int64_t X, std::int64_t m_max, bool strict_height, int threads) {
    if (n < 2 || X < 0 || m_max < 1) throw Error(ErrorKind::ContractViolation, "bad W_m census parameters");
    BoxShape box{n, strict_height ? X - 1 : X};
    if (box.radius < 0) box.radius = 0;
    const std::uint64_t total = box.size();
    if (total > (std::uint64_t(1) << 32)) throw Error(ErrorKind::BudgetExceeded, "W_m census over budget");
    std::vector<std::uint32_t> primes;
    for (std::uint32_t p : small_primes(static_cast<std::uint32_t>(std::max<std::int64_t>(m_max, 2))))
        if (p <= static_cast<std::uint64_t>(m_max)) primes.push_back(p);
    // squarefree m <= m_max with their prime factors
    std::vector<std::vector<std::uint32_t>> factors(static_cast<std::size_t>(m_max + 1));
    std::vector<bool> squarefree(static_cast<std::size_t>(m_max + 1), true);
    for (std::uint32_t p : primes) {
        for (std::int64_t k = p; k <= m_max; k += p) factors[static_cast<std::size_t>(k)].push_back(p);
        for (std::int64_t k = std::int64_t(p) * p; k <= m_max; k += std::int64_t(p) * p)
            squarefree[static_cast<std::size_t>(k)] = false;
    }
    const std::int64_t shards = std::max<std::int64_t>(1, std::min<std::int64_t>(static_cast<std::int64_t>(total), 64));
    struct Partial {
        std::vector<WmRow> rows;
        std::uint64_t zero = 0;
        Integer max_abs = 0;
    };
    std::vector<Partial> parts(static_cast<std::size_t>(shards));
    run_shards(shards, threads, [&](std::int64_t shard) {
        Partial& part = parts[static_cast<std::size_t>(shard)];
        part.rows.assign(static_cast<std::size_t>(m_max + 1), WmRow{});
        Block blk = shard_block(static_cast<std::int64_t>(total), shards, shard);
        std::vector<std::int64_t> a;
        if (blk.begin < blk.end) box.decode(static_cast<std::uint64_t>(blk.begin), a);
        std::map<std::uint32_t, DiscClass> cls;
        for (std::int64_t i = blk.begin; i < blk.end; ++i) {
            if (i > blk.begin) box.increment(a);
            std::vector<Integer> c(a.begin(), a.end());
            BinaryForm f(c);
            Integer d = discriminant(f);
            if (d == 0) {
                ++part.zero;
                continue;
            }
            part.max_abs = std::max(part.max_abs, abs(d));
            cls.clear();
            for (std::uint32_t p : primes) {
                if (Integer(p) * p > abs(d)) break;
                if (d % (Integer(p) * p) != 0) continue;
                cls[p] = classify(ResidueForm::of(f, p));
            }
            for (std::int64_t m = 1; m <= m_max; ++m) {
                if (!squarefree[static_cast<std::size_t>(m)]) continue;
                bool strong = true, weak = true, divisible = true;
                for (std::uint32_t p : factors[static_cast<std::size_t>(m)]) {
                    auto it = cls.find(p);
                    if (it == cls.end()) {
                        strong = weak = divisible = false;
                        break;
                    }
                    strong = strong && it->second == DiscClass::StrongP2;
                    weak = weak && it->second == DiscClass::WeakP2;
                }
                auto& row = part.rows[static_cast<std::size_t>(m)];
                row.strong += strong;
                row.weak += weak;
                row.divisible += divisible;
            }
        }
    });
    WmCensus out;
    out.n = n;
    out.X = X;
    out.total = total;
    for (std::int64_t m = 1; m <= m_max; ++m) {
        if (!squarefree[static_cast<std::size_t>(m)]) continue;
        WmRow row;
        row.m = m;
        for (const auto& part : parts) {
            row.strong += part.rows[static_cast<std::size_t>(m)].strong;
            row.weak += part.rows[static_cast<std::size_t>(m)].weak;
            row.divisible += part.rows[static_cast<std::size_t>(m)].divisible;
        }
        out.rows.push_back(row);
    }
    for (const auto& part : parts) {
        out.zero_disc += part.zero;
        out.max_abs_disc = std::max(out.max_abs_disc, part.max_abs);
    }
    return out;
}

InclusionExclusion inclusion_exclusion_check(int n, std::int64_t X) {
    BoxShape box{n, X};
    const std::uint64_t total = box.size();
    if (total > 10000000) throw Error(ErrorKind::BudgetExceeded, "inclusion-exclusion box too large");
    InclusionExclusion out;
    Integer max_abs = 0;
    std::vector<std::int64_t> a;
    box.decode(0, a);
    for (std::uint64_t i = 0; i < total; ++i) {
        if (i) box.increment(a);
        Integer d = discriminant(BinaryForm(std::vector<Integer>(a.begin(), a.end())));
        max_abs = std::max(max_abs, abs(d));
        if (d != 0 && is_squarefree(d) == Tristate::yes) ++out.direct;
    }
    out.m_max = std::max<std::int64_t>(1, checked_i64(max_abs));
    WmCensus wm = wm_tail_census(n, X, out.m_max);
    for (const auto& row : wm.rows) {
        int mu = 1;
        std::int64_t m = row.m;
        for (std::int64_t p = 2; p * p <= m; ++p)
            if (m % p == 0) {
                mu = -mu;
                m /= p;
            }
        if (m > 1) mu = -mu;
        out.signed_sum += Integer(mu) * Integer(row.divisible);
    }
    return out;
}

std::vector<BinaryForm> sign_twins(const BinaryForm& f) {
    const int n = f.degree();
    std::vector<Integer> neg_y(f.coeffs().size()), neg_all(f.coeffs().size());
    for (int i = 0; i <= n; ++i) {
        neg_y[i] = i % 2 ? Integer(-f[i]) : f[i];  // f(x, -y)
        neg_all[i] = -f[i];
    }
    // -I gives (-1)^n f; diag(1, -1) gives -f(x, -y); diag(-1, 1) the product
    std::vector<BinaryForm> out{f};
    BinaryForm a = n % 2 ? BinaryForm(neg_all) : f;
    std::vector<Integer> minus_neg_y(neg_y.size());
    for (std::size_t i = 0; i < neg_y.size(); ++i) minus_neg_y[i] = -neg_y[i];
    BinaryForm b(minus_neg_y);
    BinaryForm c = n % 2 ? BinaryForm(neg_y) : b;
    for (const auto& g : {a, b, c})
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    return out;
}

MinerResult field_miner(int n, std::int64_t X, const MinerOptions& options) {
    if (n < 3) throw Error(ErrorKind::ContractViolation, "the miner needs n >= 3");
    if (X < 0) throw Error(ErrorKind::ContractViolation, "the miner needs X >= 0");
    BoxShape box{n, X};
    const std::uint64_t total = box.size();
    if (total > (std::uint64_t(1) << 32)) throw Error(ErrorKind::BudgetExceeded, "miner box over budget");
    SquarefreeTable table(table_size_for(n, X));
    const std::int64_t shards = std::max<std::int64_t>(1, std::min<std::int64_t>(static_cast<std::int64_t>(total), 256));
    struct Partial {
        std::vector<BinaryForm> accepted;
        std::uint64_t squarefree = 0, dropped = 0, rejected_sn = 0;
    };
    std::vector<Partial> parts(static_cast<std::size_t>(shards));
    run_shards(shards, options.threads, [&](std::int64_t shard) {
        Partial& part = parts[static_cast<std::size_t>(shard)];
        Block blk = shard_block(static_cast<std::int64_t>(total), shards, shard);
        std::vector<std::int64_t> a;
        if (blk.begin < blk.end) box.decode(static_cast<std::uint64_t>(blk.begin), a);
        for (std::int64_t i = blk.begin; i < blk.end; ++i) {
            if (i > blk.begin) box.increment(a);
            if (a[0] == 0) continue;
            BinaryForm f(std::vector<Integer>(a.begin(), a.end()));
            Integer d = discriminant(f);
            if (d == 0) continue;
            Integer ad = abs(d);
            bool sqf = ad < Integer(table.size()) ? table[ad.convert_to<std::uint64_t>()]
                                                  : is_squarefree(d) == Tristate::yes;
            if (!sqf) continue;
            ++part.squarefree;
            Reduction verdict;
            try {
                verdict = is_strongly_minkowski_reduced(f, options.digits, options.max_digits).verdict;
            } catch (const Error&) {
                verdict = Reduction::uncertain;
            }
            if (verdict == Reduction::uncertain) {
                ++part.dropped;
                continue;
            }
            if (verdict != Reduction::yes) continue;
            if (options.require_sn && !certify_sn_galois(f, options.sn_prime_budget).certified) {
                ++part.rejected_sn;
                continue;
            }
            part.accepted.push_back(f);
        }
    });
    MinerResult out;
    out.n = n;
    out.X = X;
    out.scanned = total;
    for (auto& part : parts) {
        out.squarefree += part.squarefree;
        out.dropped_uncertain += part.dropped;
        out.rejected_sn += part.rejected_sn;
        for (auto& f : part.accepted) out.accepted.push_back(std::move(f));
    }
    if (options.inject_duplicate && !out.accepted.empty()) out.accepted.push_back(out.accepted.front());

    // twin classes, in order of first appearance
    std::map<std::string, std::size_t> class_of;
    for (std::size_t i = 0; i < out.accepted.size(); ++i) {
        std::string key;
        for (const auto& g : sign_twins(out.accepted[i])) {
            std::string s = g.str();
            if (key.empty() || s < key) key = s;
        }
        auto [it, fresh] = class_of.emplace(key, out.twin_classes.size());
        if (fresh) out.twin_classes.emplace_back();
        out.twin_classes[it->second].push_back(i);
    }
    out.distinct_field_lower_bound = out.twin_classes.size();

    MinerAudit& audit = out.audit;
    std::vector<std::size_t> cls(out.accepted.size());
    for (std::size_t c = 0; c < out.twin_classes.size(); ++c)
        for (std::size_t i : out.twin_classes[c]) cls[i] = c;
    for (std::size_t i = 0; i < out.accepted.size(); ++i) {
        const BinaryForm& f = out.accepted[i];
        Integer d = discriminant(f);
        bool ok = is_squarefree(d) == Tristate::yes && is_maximal(f) == Tristate::yes &&
                  is_strongly_minkowski_reduced(f, options.digits, options.max_digits).verdict == Reduction::yes;
        if (!ok) {
            ++audit.recheck_failures;
            audit.notes.push_back("recheck failed: " + f.str());
        }
        for (std::size_t j = i + 1; j < out.accepted.size(); ++j) {
            ++audit.pairs;
            if (f == out.accepted[j]) {
                ++audit.identical_pairs;
                audit.notes.push_back("identical forms at " + std::to_string(i) + " and " + std::to_string(j));
            } else if (cls[i] == cls[j]) {
                ++audit.twin_pairs;
            } else {
                ++audit.distinct_pairs;
            }
        }
    }
    audit.notes.push_back("twin pairs differ by a diagonal sign matrix: isomorphic rings, one field per class");
    audit.notes.push_back(
        "pairs in different classes: distinct forms with unique reduced bases up to sign, so nonisomorphic rings");
    audit.passed = audit.identical_pairs == 0 && audit.recheck_failures == 0;
    return out;
}

} // namespace binform
