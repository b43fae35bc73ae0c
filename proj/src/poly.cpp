#include "binform/poly.hpp"

#include <algorithm>

#include "binform/scalar.hpp"

namespace binform::fp {

namespace {

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t q) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % q);
}

} // namespace

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly reduce(Poly f, std::int64_t q) {
    for (auto& c : f) c = binform::mod(c, q);
    trim(f);
    return f;
}

Poly add(const Poly& a, const Poly& b, std::int64_t q) {
    Poly out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = (out[i] + b[i]) % q;
    trim(out);
    return out;
}

Poly sub(const Poly& a, const Poly& b, std::int64_t q) {
    Poly out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = binform::mod(out[i] - b[i], q);
    trim(out);
    return out;
}

Poly mul(const Poly& a, const Poly& b, std::int64_t q) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mulmod(a[i], b[j], q)) % q;
    }
    trim(out);
    return out;
}

Poly scale(const Poly& a, std::int64_t c, std::int64_t q) {
    Poly out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = binform::mod(mulmod(a[i], binform::mod(c, q), q), q);
    trim(out);
    return out;
}

Poly derivative(const Poly& f, std::int64_t q) {
    if (f.size() <= 1) return {};
    Poly out(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) out[i - 1] = mulmod(f[i], static_cast<std::int64_t>(i % static_cast<std::uint64_t>(q)), q);
    trim(out);
    return out;
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b, std::int64_t q) {
    if (b.empty()) throw Error(ErrorKind::ContractViolation, "polynomial division by zero");
    Poly r = a;
    trim(r);
    const int db = degree(b);
    if (degree(r) < db) return {{}, r};
    std::int64_t inv = inv_mod(b.back(), q);
    Poly quot(r.size() - b.size() + 1, 0);
    for (int k = degree(r) - db; k >= 0; --k) {
        std::int64_t c = mulmod(r[k + db], inv, q);
        quot[k] = c;
        if (c == 0) continue;
        for (int j = 0; j <= db; ++j) r[k + j] = binform::mod(r[k + j] - mulmod(c, b[j], q), q);
    }
    trim(r);
    trim(quot);
    return {quot, r};
}

Poly rem(const Poly& a, const Poly& b, std::int64_t q) { return divrem(a, b, q).second; }

Poly exact_quotient(const Poly& a, const Poly& b, std::int64_t q) {
    auto [quot, r] = divrem(a, b, q);
    if (!r.empty()) throw Error(ErrorKind::VerificationFailed, "polynomial division is not exact");
    return quot;
}

Poly monic(const Poly& f, std::int64_t q) {
    if (f.empty()) return f;
    return scale(f, inv_mod(f.back(), q), q);
}

bool is_one(const Poly& f) { return f.size() == 1 && f[0] == 1; }

Poly gcd(const Poly& a, const Poly& b, std::int64_t p) {
    Poly x = reduce(a, p), y = reduce(b, p);
    while (!y.empty()) {
        Poly r = rem(x, y, p);
        x = std::move(y);
        y = std::move(r);
    }
    return monic(x, p);
}

Poly powmod(const Poly& base, std::uint64_t e, const Poly& modulus, std::int64_t p) {
    Poly result{1};
    result = rem(result, modulus, p);
    Poly b = rem(base, modulus, p);
    while (e > 0) {
        if (e & 1) result = rem(mul(result, b, p), modulus, p);
        e >>= 1;
        if (e) b = rem(mul(b, b, p), modulus, p);
    }
    return result;
}

namespace {

void squarefree_rec(const Poly& f, std::int64_t p, int mult, std::vector<std::pair<Poly, int>>& out) {
    if (degree(f) <= 0) return;
    Poly c = gcd(f, derivative(f, p), p);
    Poly w = exact_quotient(f, c, p);
    int i = 1;
    while (degree(w) > 0) {
        Poly y = gcd(w, c, p);
        Poly fac = exact_quotient(w, y, p);
        if (degree(fac) > 0) out.emplace_back(monic(fac, p), i * mult);
        w = y;
        c = exact_quotient(c, y, p);
        ++i;
    }
    if (degree(c) > 0) {
        // c is a p-th power: take the p-th root coefficientwise.
        Poly root;
        for (std::size_t k = 0; k < c.size(); k += static_cast<std::size_t>(p)) root.push_back(c[k]);
        squarefree_rec(root, p, mult * static_cast<int>(p), out);
    }
}

} // namespace

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& f, std::int64_t p) {
    Poly g = monic(reduce(f, p), p);
    if (g.empty()) throw Error(ErrorKind::ContractViolation, "squarefree decomposition of zero");
    std::vector<std::pair<Poly, int>> out;
    squarefree_rec(g, p, 1, out);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    return out;
}

std::vector<std::pair<int, Poly>> distinct_degree(const Poly& input, std::int64_t p) {
    std::vector<std::pair<int, Poly>> out;
    Poly f = monic(reduce(input, p), p);
    Poly x{0, 1};
    Poly h = x;
    int d = 0;
    while (degree(f) >= 2 * (d + 1)) {
        ++d;
        h = powmod(h, static_cast<std::uint64_t>(p), f, p);
        Poly g = gcd(f, sub(h, x, p), p);
        if (degree(g) > 0) {
            out.emplace_back(d, g);
            f = exact_quotient(f, g, p);
            h = rem(h, f, p);
        }
    }
    if (degree(f) > 0) out.emplace_back(degree(f), f);
    return out;
}

std::vector<int> degree_pattern(const Poly& f, std::int64_t p) {
    std::vector<int> pattern;
    for (const auto& [d, g] : distinct_degree(f, p)) {
        for (int k = 0; k < degree(g) / d; ++k) pattern.push_back(d);
    }
    std::sort(pattern.begin(), pattern.end());
    return pattern;
}

} // namespace binform::fp
