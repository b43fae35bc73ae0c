#include <doctest.h>

#include <algorithm>
#include <map>

#include "binform/sieve.hpp"
#include "support.hpp"

using namespace binform;
using namespace binform::testing;

namespace {

CensusConfig config(int n, std::int64_t X, std::int64_t shards = 1) {
    CensusConfig c;
    c.n = n;
    c.X = X;
    c.shards = shards;
    c.prime_bound = 1000;
    return c;
}

template <class F>
void for_each_form(int n, std::int64_t X, F&& body) {
    std::vector<Integer> c(static_cast<std::size_t>(n + 1), Integer(-X));
    while (true) {
        body(BinaryForm(c));
        int i = n;
        while (i >= 0 && c[i] == X) c[i--] = -X;
        if (i < 0) return;
        ++c[i];
    }
}

} // namespace

// Frozen from a sympy brute force over the box; maximal quadratic rings are
// those of fundamental discriminant or Delta = 1.
TEST_CASE("quadratic census matches brute force") {
    struct Row {
        std::int64_t X;
        bool strict;
        std::uint64_t total, squarefree, maximal, zero;
    };
    for (Row r : {Row{1, false, 27, 18, 20, 5}, Row{3, false, 343, 142, 212, 17}, Row{5, false, 1331, 538, 736, 37},
                  Row{5, true, 729, 242, 360, 33}}) {
        CAPTURE(r.X);
        auto cfg = config(2, r.X);
        cfg.strict_height = r.strict;
        auto s = squarefree_disc_census(cfg);
        auto m = maximal_census(cfg);
        CHECK(s.total == r.total);
        CHECK(s.favorable == r.squarefree);
        CHECK(m.favorable == r.maximal);
        CHECK(s.zero_disc == r.zero);
        CHECK(m.zero_disc == r.zero);
        CHECK(s.unknown == 0);
        CHECK(m.unknown == 0);
    }
}

TEST_CASE("cubic squarefree census matches brute force") {
    auto a = squarefree_disc_census(config(3, 1));
    CHECK(a.total == 81);
    CHECK(a.favorable == 36);
    CHECK(a.zero_disc == 21);
    auto b = squarefree_disc_census(config(3, 2));
    CHECK(b.total == 625);
    CHECK(b.favorable == 128);
    CHECK(b.zero_disc == 65);
}

TEST_CASE("maximal census agrees with the per-form maximality test") {
    for (int n : {3, 4}) {
        const std::int64_t X = n == 3 ? 2 : 1;
        auto res = maximal_census(config(n, X));
        std::uint64_t count = 0;
        for_each_form(n, X, [&](const BinaryForm& f) {
            if (discriminant(f) != 0 && is_maximal(f) == Tristate::yes) ++count;
        });
        CAPTURE(n);
        CHECK(res.favorable == count);
    }
}

TEST_CASE("census is independent of the shard count") {
    auto one = maximal_census(config(3, 2, 1));
    for (std::int64_t shards : {2, 7, 64}) {
        auto cfg = config(3, 2, shards);
        cfg.threads = 3;
        auto many = maximal_census(cfg);
        CHECK(many.favorable == one.favorable);
        CHECK(many.unfavorable == one.unfavorable);
        CHECK(many.shards.size() == static_cast<std::size_t>(shards));
    }
}

TEST_CASE("census counts partition the box") {
    for (auto kind : {CensusKind::squarefree, CensusKind::maximal}) {
        auto cfg = config(4, 1, 5);
        auto res = run_census(kind, cfg);
        CHECK(res.favorable + res.unfavorable + res.unknown == res.total);
        std::uint64_t sum = 0;
        for (const auto& s : res.shards) sum += s.total;
        CHECK(sum == res.total);
        CHECK(res.favorable <= res.total - res.zero_disc);
    }
}

TEST_CASE("sampled census is reproducible from the seed") {
    auto cfg = config(3, 50, 4);
    cfg.samples = 2000;
    cfg.seed = 11;
    auto a = squarefree_disc_census(cfg);
    cfg.shards = 1;
    auto b = squarefree_disc_census(cfg);
    CHECK(a.sampled);
    CHECK(a.total == 2000);
    CHECK(a.favorable == b.favorable);
    cfg.seed = 12;
    auto c = squarefree_disc_census(cfg);
    CHECK(c.total == 2000);
}

TEST_CASE("local conditions filter the census and scale the reference") {
    auto cfg = config(2, 3);
    cfg.sigma.push_back(SigmaCondition::leading_unit(2));
    auto res = squarefree_disc_census(cfg);
    CHECK(res.favorable == 88);  // brute force: a odd and b^2 - 4ac squarefree
    CHECK(res.sigma_factor == Rational(1, 2));
    auto plain = squarefree_disc_census(config(2, 3));
    CHECK(res.reference == doctest::Approx(plain.reference / 2));

    auto listed = SigmaCondition::from_residues(3, {{1, 0, 1}, {1, 0, 2}});
    CHECK(listed.allowed({1, 0, 1}));
    CHECK(!listed.allowed({1, 0, 0}));
    CHECK_THROWS_AS(SigmaCondition::leading_unit(4), Error);
    auto twice = config(2, 3);
    twice.sigma = {SigmaCondition::leading_unit(2), SigmaCondition::leading_unit(2)};
    CHECK_THROWS_AS(squarefree_disc_census(twice), Error);
}

TEST_CASE("square prime detection") {
    CHECK(square_primes_small(1).empty());
    CHECK(square_primes_small(12) == std::vector<std::uint64_t>{2});
    CHECK(square_primes_small(900) == std::vector<std::uint64_t>{2, 3, 5});
    CHECK(square_primes_small(999983ull * 999983ull) == std::vector<std::uint64_t>{999983});
    CHECK(square_primes_small(999983ull * 1000003ull).empty());
    CHECK(square_primes_small(8ull * 999983ull * 999983ull) == std::vector<std::uint64_t>{2, 999983});
    CHECK_THROWS_AS(square_primes_small(0), Error);
}

TEST_CASE("W_m divisibility column matches brute force") {
    auto wm = wm_tail_census(2, 2, 6);
    CHECK(wm.total == 125);
    const std::map<std::int64_t, std::uint64_t> expected{{1, 112}, {2, 62}, {3, 8}, {5, 0}, {6, 0}};
    for (const auto& row : wm.rows) {
        CAPTURE(row.m);
        CHECK(row.divisible == expected.at(row.m));
        if (row.m == 2 || row.m == 3 || row.m == 5) CHECK(row.strong + row.weak == row.divisible);
    }
    CHECK(wm.total == wm.rows.front().divisible + wm.zero_disc);
}

TEST_CASE("W_m strong and weak columns split m^2 | Delta at a prime") {
    auto wm = wm_tail_census(3, 2, 7);
    for (const auto& row : wm.rows) {
        if (row.m == 1) continue;
        bool prime = row.m == 2 || row.m == 3 || row.m == 5 || row.m == 7;
        if (prime) CHECK(row.strong + row.weak == row.divisible);
        else CHECK(row.strong + row.weak <= row.divisible);
    }
}

TEST_CASE("inclusion-exclusion over m recovers the squarefree count") {
    auto ie = inclusion_exclusion_check(2, 2);
    CHECK(ie.direct == 42);
    CHECK(ie.equal());
    auto ie3 = inclusion_exclusion_check(3, 1);
    CHECK(ie3.direct == 36);
    CHECK(ie3.equal());
}

TEST_CASE("sign twins") {
    BinaryForm cubic({1, 2, 3, 5});
    auto t = sign_twins(cubic);
    CHECK(t.size() == 4);
    CHECK(std::find(t.begin(), t.end(), BinaryForm({-1, 2, -3, 5})) != t.end());
    BinaryForm quartic({1, 2, 3, 5, 7});
    auto q = sign_twins(quartic);
    CHECK(q.size() == 2);
    CHECK(q[1] == BinaryForm({-1, 2, -3, 5, -7}));
    for (const auto& g : t) CHECK(discriminant(g) == discriminant(cubic));
}

TEST_CASE("field miner accepts reduced squarefree forms and audits them") {
    auto res = field_miner(3, 2);
    CHECK(!res.accepted.empty());
    CHECK(res.audit.passed);
    CHECK(res.audit.identical_pairs == 0);
    CHECK(res.distinct_field_lower_bound == res.twin_classes.size());
    CHECK(res.distinct_field_lower_bound <= res.accepted.size());
    for (const auto& f : res.accepted) {
        CHECK(f[0] != 0);
        CHECK(is_squarefree(discriminant(f)) == Tristate::yes);
    }
    CHECK(res.audit.pairs == res.accepted.size() * (res.accepted.size() - 1) / 2);

    MinerOptions bad;
    bad.inject_duplicate = true;
    auto dup = field_miner(3, 2, bad);
    CHECK(!dup.audit.passed);
    CHECK(dup.audit.identical_pairs == 1);
    CHECK(dup.distinct_field_lower_bound == res.distinct_field_lower_bound);
}
