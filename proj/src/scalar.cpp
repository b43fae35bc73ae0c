#include "binform/scalar.hpp"

#include <limits>

namespace binform {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ContractViolation: return "ContractViolation";
    case ErrorKind::NotBasis: return "NotBasis";
    case ErrorKind::InvalidPrime: return "InvalidPrime";
    case ErrorKind::DegenerateForm: return "DegenerateForm";
    case ErrorKind::NotIsotropic: return "NotIsotropic";
    case ErrorKind::NotNested: return "NotNested";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::NotWeaklyDivisible: return "NotWeaklyDivisible";
    case ErrorKind::NotGeneric: return "NotGeneric";
    case ErrorKind::NonIntegralQuotient: return "NonIntegralQuotient";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::InYLocus: return "InYLocus";
    case ErrorKind::QNonzero: return "QNonzero";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    }
    return "Unknown";
}

Integer gcd(const Integer& a, const Integer& b) {
    return boost::multiprecision::gcd(abs(a), abs(b));
}

Integer ext_gcd(const Integer& a, const Integer& b, Integer& s, Integer& t) {
    Integer old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * cur_s;
        old_s = cur_s;
        cur_s = tmp;
        tmp = old_t - q * cur_t;
        old_t = cur_t;
        cur_t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t) {
    std::int64_t old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * cur_s;
        old_s = cur_s;
        cur_s = tmp;
        tmp = old_t - q * cur_t;
        old_t = cur_t;
        cur_t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
    std::int64_t s, t;
    if (ext_gcd(mod(a, m), m, s, t) != 1) throw Error(ErrorKind::ContractViolation, "value not invertible");
    return mod(s, m);
}

Integer inv_mod(const Integer& a, const Integer& m) {
    Integer s, t;
    if (ext_gcd(mod(a, m), m, s, t) != 1) throw Error(ErrorKind::ContractViolation, "value not invertible");
    return mod(s, m);
}

Integer exact_div(const Integer& a, const Integer& b) {
    if (b == 0) throw Error(ErrorKind::VerificationFailed, "division by zero");
    Integer q, r;
    boost::multiprecision::divide_qr(a, b, q, r);
    if (r != 0) throw Error(ErrorKind::VerificationFailed, "inexact division");
    return q;
}

Integer numerator(const Rational& q) { return Integer(boost::multiprecision::numerator(q)); }
Integer denominator(const Rational& q) { return Integer(boost::multiprecision::denominator(q)); }

std::string to_string(const Rational& q) {
    Integer d = denominator(q);
    if (d == 1) return numerator(q).str();
    return numerator(q).str() + "/" + d.str();
}

std::string to_string(const Integer& a) { return a.str(); }

std::int64_t checked_i64(const Integer& a) {
    if (a > std::numeric_limits<std::int64_t>::max() || a < std::numeric_limits<std::int64_t>::min()) {
        throw Error(ErrorKind::ContractViolation, "value exceeds 64 bits: " + a.str());
    }
    return static_cast<std::int64_t>(a);
}

} // namespace binform
