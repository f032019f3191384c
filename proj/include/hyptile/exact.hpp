// Exact scalars: arbitrary-precision integers, rationals and their dyadic view.
//
// Matrix entries of the tower systems are sums of powers of two with
// exponents like -3^n, so everything combinatorial is carried in GMP-backed
// rationals and only converted to double at the reporting edge.
#ifndef HYPTILE_EXACT_HPP
#define HYPTILE_EXACT_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <boost/multiprecision/gmp.hpp>

namespace hyptile {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Exact scalar used for matrix entries and simplex coordinates.
using ExactScalar = Rational;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ExactMatrix = Matrix<Rational>;
using ExactVector = Vector<Rational>;

/// mantissa * 2^exp2 with an odd mantissa (or mantissa 0, exp2 0).
struct Dyadic {
  BigInt mantissa;
  std::int64_t exp2 = 0;

  Rational to_rational() const;
  friend bool operator==(const Dyadic&, const Dyadic&) = default;
};

BigInt pow2(std::uint64_t e);
BigInt pow3(std::uint64_t e);
BigInt ipow(const BigInt& base, std::uint64_t e);

/// 2^e for any signed exponent, exactly.
Rational pow2_rational(std::int64_t e);

Dyadic make_dyadic(BigInt mantissa, std::int64_t exp2);
/// The dyadic form of q, if its reduced denominator is a power of two.
std::optional<Dyadic> dyadic_form(const Rational& q);
inline bool is_dyadic(const Rational& q) { return dyadic_form(q).has_value(); }

/// Natural log of a positive big integer without overflowing double.
double log_of(const BigInt& n);
/// Natural log of a positive rational; valid far outside the double range.
double log_of(const Rational& q);
double to_double(const Rational& q);

/// Floor division and modulo toward -infinity.
std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t floor_mod(std::int64_t a, std::int64_t b);
BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt floor_mod(const BigInt& a, const BigInt& b);

/// Exact conversion of a finite double to a rational.
Rational from_double(double x);
/// Exact floor of a finite double as a big integer.
BigInt floor_to_bigint(double x);

std::string to_string(const BigInt& n);
std::string to_string(const Rational& q);

/// Column j scaled so that its entries sum to one; nullopt for a zero column.
std::optional<ExactVector> normalized_column(const ExactMatrix& m, Eigen::Index j);

}  // namespace hyptile

namespace Eigen {

template <>
struct NumTraits<hyptile::Rational> : GenericNumTraits<hyptile::Rational> {
  typedef hyptile::Rational Real;
  typedef hyptile::Rational NonInteger;
  typedef hyptile::Rational Nested;
  typedef hyptile::Rational Literal;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 64,
    MulCost = 128
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

#endif  // HYPTILE_EXACT_HPP
