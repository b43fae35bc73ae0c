#pragma once

// Exact scalar types and the Eigen aliases built on them.

#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

// Eigen 3.4 gives every dense type a const_iterator typedef (void for
// matrices), which trips Boost's byte-container probe under C++20.
namespace boost::multiprecision::detail {
template <class C>
    requires requires(const C& c) {
        typename C::Scalar;
        c.derived();
    }
struct is_byte_container<C> : std::false_type {};
} // namespace boost::multiprecision::detail

namespace binform {

// Expression templates are disabled so the types behave as plain values
// inside Eigen kernels.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = MatrixX<Integer>;
using IntVector = VectorX<Integer>;
using RatMatrix = MatrixX<Rational>;
using RatVector = VectorX<Rational>;
using I64Matrix = MatrixX<std::int64_t>;

enum class ErrorKind {
    ParseError,
    ContractViolation,
    NotBasis,
    InvalidPrime,
    DegenerateForm,
    NotIsotropic,
    NotNested,
    NotPrimitive,
    NotWeaklyDivisible,
    NotGeneric,
    NonIntegralQuotient,
    VerificationFailed,
    InYLocus,
    QNonzero,
    BudgetExceeded,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

// Nonnegative remainder.
inline Integer mod(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

Integer gcd(const Integer& a, const Integer& b);

// Returns g = gcd(a, b) >= 0 and sets s, t with s*a + t*b = g.
Integer ext_gcd(const Integer& a, const Integer& b, Integer& s, Integer& t);
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t);

// Inverse of a modulo m; throws ContractViolation when not invertible.
std::int64_t inv_mod(std::int64_t a, std::int64_t m);
Integer inv_mod(const Integer& a, const Integer& m);

// Exact quotient; throws VerificationFailed when b does not divide a.
Integer exact_div(const Integer& a, const Integer& b);

Integer numerator(const Rational& q);
Integer denominator(const Rational& q);
std::string to_string(const Rational& q);
std::string to_string(const Integer& a);

std::int64_t checked_i64(const Integer& a);

} // namespace binform

namespace Eigen {

template <>
struct NumTraits<binform::Integer> : GenericNumTraits<binform::Integer> {
    using Real = binform::Integer;
    using NonInteger = binform::Rational;
    using Literal = binform::Integer;
    using Nested = binform::Integer;
    enum {
        IsInteger = 1,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 16,
        MulCost = 32
    };
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
};

template <>
struct NumTraits<binform::Rational> : GenericNumTraits<binform::Rational> {
    using Real = binform::Rational;
    using NonInteger = binform::Rational;
    using Literal = binform::Rational;
    using Nested = binform::Rational;
    enum {
        IsInteger = 0,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 32,
        MulCost = 64
    };
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
};

} // namespace Eigen
