#include "binform/forms.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "binform/linalg.hpp"
#include "binform/poly.hpp"

namespace binform {

BinaryForm::BinaryForm(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 2) throw Error(ErrorKind::ContractViolation, "a binary form needs degree >= 1");
}

BinaryForm::BinaryForm(std::initializer_list<long long> coeffs) {
    for (long long c : coeffs) coeffs_.emplace_back(c);
    if (coeffs_.size() < 2) throw Error(ErrorKind::ContractViolation, "a binary form needs degree >= 1");
}

bool BinaryForm::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& c) { return c == 0; });
}

Integer BinaryForm::operator()(const Integer& x, const Integer& y) const {
    Integer acc = 0, ypow = 1;
    std::vector<Integer> ypows(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        ypows[i] = ypow;
        ypow *= y;
    }
    Integer xpow = 1;
    for (int i = degree(); i >= 0; --i) {
        acc += coeffs_[static_cast<std::size_t>(i)] * xpow * ypows[static_cast<std::size_t>(i)];
        xpow *= x;
    }
    return acc;
}

BinaryForm BinaryForm::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorKind::ParseError, "form must look like n:a0,...,an");
    int n = 0;
    auto head = text.substr(0, colon);
    auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), n);
    if (ec != std::errc() || ptr != head.data() + head.size() || n < 1)
        throw Error(ErrorKind::ParseError, "bad degree in form: " + std::string(text));
    std::vector<Integer> coeffs;
    std::string body(text.substr(colon + 1));
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw Error(ErrorKind::ParseError, "empty coefficient in form");
        item = item.substr(b, e - b + 1);
        std::size_t start = (item[0] == '-' || item[0] == '+') ? 1 : 0;
        if (start == item.size() || !std::all_of(item.begin() + static_cast<long>(start), item.end(), ::isdigit))
            throw Error(ErrorKind::ParseError, "bad coefficient: " + item);
        if (item[0] == '+') item = item.substr(1);
        coeffs.emplace_back(item);
    }
    if (static_cast<int>(coeffs.size()) != n + 1)
        throw Error(ErrorKind::ParseError, "form of degree " + std::to_string(n) + " needs " + std::to_string(n + 1) +
                                               " coefficients");
    return BinaryForm(std::move(coeffs));
}

std::string BinaryForm::str() const {
    std::string out = std::to_string(degree()) + ":";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out += ",";
        out += coeffs_[i].str();
    }
    return out;
}

BinaryForm BinaryForm::times_x() const {
    auto c = coeffs_;
    c.emplace_back(0);
    return BinaryForm(std::move(c));
}

BinaryForm BinaryForm::swapped() const {
    auto c = coeffs_;
    std::reverse(c.begin(), c.end());
    return BinaryForm(std::move(c));
}

UnimodularMap::UnimodularMap(const Matrix2& m) : m_(m) {
    if (m_(0, 0) * m_(1, 1) - m_(0, 1) * m_(1, 0) != 1)
        throw Error(ErrorKind::ContractViolation, "matrix does not have determinant 1");
}

UnimodularMap::UnimodularMap(long long a, long long b, long long c, long long d) {
    Matrix2 m;
    m << Integer(a), Integer(b), Integer(c), Integer(d);
    *this = UnimodularMap(m);
}

UnimodularMap UnimodularMap::inverse() const {
    Matrix2 inv;
    inv << m_(1, 1), Integer(-m_(0, 1)), Integer(-m_(1, 0)), m_(0, 0);
    return UnimodularMap(inv);
}

namespace {

// Coefficient vectors of binary forms indexed by the power of y.
std::vector<Integer> multiply_forms(const std::vector<Integer>& a, const std::vector<Integer>& b) {
    std::vector<Integer> out(a.size() + b.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

} // namespace

BinaryForm act(const UnimodularMap& gamma, const BinaryForm& f) {
    const int n = f.degree();
    // x' = g00 x + g10 y, y' = g01 x + g11 y
    std::vector<Integer> lx{gamma(0, 0), gamma(1, 0)}, ly{gamma(0, 1), gamma(1, 1)};
    std::vector<std::vector<Integer>> px(n + 1), py(n + 1);
    px[0] = py[0] = {Integer(1)};
    for (int k = 1; k <= n; ++k) {
        px[k] = multiply_forms(px[k - 1], lx);
        py[k] = multiply_forms(py[k - 1], ly);
    }
    std::vector<Integer> out(n + 1, Integer(0));
    for (int i = 0; i <= n; ++i) {
        if (f[i] == 0) continue;
        auto term = multiply_forms(px[n - i], py[i]);
        for (int k = 0; k <= n; ++k) out[k] += f[i] * term[k];
    }
    return BinaryForm(std::move(out));
}

Integer height(const BinaryForm& f) {
    Integer h = 0;
    for (const auto& c : f.coeffs()) h = std::max(h, abs(c));
    return h;
}

Integer discriminant(const BinaryForm& f) { return discriminant_of<Integer>(f.coeffs()); }

IntVector RankNRing::multiply(const IntVector& x, const IntVector& y) const {
    IntVector out = IntVector::Zero(rank);
    for (int i = 0; i < rank; ++i) {
        if (x(i) == 0) continue;
        for (int j = 0; j < rank; ++j) {
            if (y(j) == 0) continue;
            out += (x(i) * y(j)) * table[i].row(j).transpose();
        }
    }
    return out;
}

Integer RankNRing::trace(const IntVector& x) const {
    // Trace of multiplication by x on the basis.
    Integer t = 0;
    for (int i = 0; i < rank; ++i) {
        if (x(i) == 0) continue;
        Integer ti = 0;
        for (int j = 0; j < rank; ++j) ti += table[i](j, j);
        t += x(i) * ti;
    }
    return t;
}

IntMatrix RankNRing::trace_gram() const {
    IntMatrix g(rank, rank);
    for (int i = 0; i < rank; ++i) {
        for (int j = 0; j < rank; ++j) {
            IntVector ei = IntVector::Zero(rank), ej = IntVector::Zero(rank);
            ei(i) = 1;
            ej(j) = 1;
            g(i, j) = trace(multiply(ei, ej));
        }
    }
    return g;
}

RankNRing ring_of(const BinaryForm& f) {
    const int n = f.degree();
    if (f[0] == 0) throw Error(ErrorKind::NotBasis, "leading coefficient vanishes");
    Integer disc = discriminant(f);
    if (disc == 0) throw Error(ErrorKind::NotBasis, "discriminant vanishes");
    // zeta_k in the power basis 1, theta, ..., theta^{n-1}.
    RatMatrix z = RatMatrix::Zero(n, n);
    z(0, 0) = 1;
    for (int k = 1; k < n; ++k)
        for (int i = 0; i < k; ++i) z(k, k - i) = Rational(f[i]);
    // Reduction of theta^j for j < 2n-1 modulo F(theta) = 0, F = sum a_i x^{n-i}.
    std::vector<RatVector> power(2 * n - 1, RatVector::Zero(n));
    for (int j = 0; j < n; ++j) power[j](j) = 1;
    for (int j = n; j < 2 * n - 1; ++j) {
        // theta^j = theta * theta^{j-1}
        RatVector prev = power[j - 1];
        RatVector next = RatVector::Zero(n);
        for (int k = 0; k + 1 < n; ++k) next(k + 1) = prev(k);
        Rational top = prev(n - 1);
        if (top != 0) {
            // theta^n = -(a_1 theta^{n-1} + ... + a_n) / a_0
            for (int i = 1; i <= n; ++i) next(n - i) -= top * Rational(f[i]) / Rational(f[0]);
        }
        power[j] = next;
    }
    RatMatrix z_inv;
    {
        RatMatrix aug(n, 2 * n);
        aug.leftCols(n) = z;
        aug.rightCols(n) = RatMatrix::Identity(n, n);
        rref(aug);
        z_inv = aug.rightCols(n);
    }
    RankNRing ring;
    ring.rank = n;
    ring.disc = disc;
    ring.table.assign(n, IntMatrix::Zero(n, n));
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            // product in the power basis
            RatVector prod = RatVector::Zero(n);
            for (int a = 0; a < n; ++a) {
                if (z(i, a) == 0) continue;
                for (int b = 0; b < n; ++b) {
                    if (z(j, b) == 0) continue;
                    prod += z(i, a) * z(j, b) * power[a + b];
                }
            }
            RatVector coords = (prod.transpose() * z_inv).transpose();
            for (int k = 0; k < n; ++k) {
                if (denominator(coords(k)) != 1)
                    throw Error(ErrorKind::VerificationFailed, "non-integral structure constant");
                ring.table[i](j, k) = numerator(coords(k));
                ring.table[j](i, k) = ring.table[i](j, k);
            }
        }
    }
    if (bareiss_determinant(ring.trace_gram()) != disc)
        throw Error(ErrorKind::VerificationFailed, "ring discriminant differs from form discriminant");
    return ring;
}

SnCertificate certify_sn_galois(const BinaryForm& f, int prime_budget) {
    SnCertificate cert;
    const int n = f.degree();
    if (n <= 1) {
        cert.certified = true;
        return cert;
    }
    Integer disc = discriminant(f);
    if (f[0] == 0 || disc == 0) return cert;
    // An n-cycle gives transitivity, an (n-1)-cycle then gives double
    // transitivity, and a single 2-cycle with all other cycles odd powers
    // to a transposition. Together they generate S_n.
    bool full_cycle = false, long_cycle = false, transposition = false;
    int tried = 0;
    for (std::uint32_t p : small_primes()) {
        if (tried >= prime_budget) break;
        Integer pp = p;
        if (f[0] % pp == 0 || disc % pp == 0) continue;
        ++tried;
        fp::Poly poly(n + 1);
        for (int i = 0; i <= n; ++i) poly[n - i] = static_cast<std::int64_t>(mod(f[i], pp));
        auto pattern = fp::degree_pattern(poly, p);
        cert.witnesses.emplace_back(p, pattern);
        if (pattern.size() == 1) full_cycle = true;
        if (pattern.size() == 2 && pattern[0] == 1 && pattern[1] == n - 1) long_cycle = true;
        int twos = static_cast<int>(std::count(pattern.begin(), pattern.end(), 2));
        bool others_odd = std::all_of(pattern.begin(), pattern.end(), [](int d) { return d == 2 || d % 2 == 1; });
        if (twos == 1 && others_odd) transposition = true;
        if (n == 2 ? full_cycle : (full_cycle && long_cycle && transposition)) {
            cert.certified = true;
            break;
        }
    }
    return cert;
}

} // namespace binform
