#include "hyptile/exact.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hyptile/errors.hpp"

namespace hyptile {

namespace mp = boost::multiprecision;

Rational Dyadic::to_rational() const {
  if (exp2 >= 0) return Rational(mantissa * pow2(static_cast<std::uint64_t>(exp2)));
  return Rational(mantissa, pow2(static_cast<std::uint64_t>(-exp2)));
}

BigInt pow2(std::uint64_t e) {
  BigInt r = 1;
  r <<= e;
  return r;
}

BigInt ipow(const BigInt& base, std::uint64_t e) {
  BigInt result = 1;
  BigInt b = base;
  while (e) {
    if (e & 1u) result *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return result;
}

BigInt pow3(std::uint64_t e) { return ipow(BigInt(3), e); }

Rational pow2_rational(std::int64_t e) {
  if (e >= 0) return Rational(pow2(static_cast<std::uint64_t>(e)));
  return Rational(BigInt(1), pow2(static_cast<std::uint64_t>(-e)));
}

Dyadic make_dyadic(BigInt mantissa, std::int64_t exp2) {
  if (mantissa == 0) return Dyadic{BigInt(0), 0};
  auto shift = static_cast<std::int64_t>(mp::lsb(mp::abs(mantissa)));
  mantissa >>= shift;
  return Dyadic{std::move(mantissa), exp2 + shift};
}

std::optional<Dyadic> dyadic_form(const Rational& q) {
  BigInt num = mp::numerator(q);
  BigInt den = mp::denominator(q);
  if (num == 0) return Dyadic{BigInt(0), 0};
  auto lsb = mp::lsb(den);
  auto msb = mp::msb(den);
  if (lsb != msb) return std::nullopt;
  return make_dyadic(std::move(num), -static_cast<std::int64_t>(lsb));
}

double log_of(const BigInt& n) {
  if (n <= 0) throw DomainError("log_of: argument must be positive");
  auto bits = mp::msb(n);
  if (bits < 1000) return std::log(n.convert_to<double>());
  auto shift = bits - 64;
  BigInt top = n >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

double log_of(const Rational& q) {
  if (q <= 0) throw DomainError("log_of: argument must be positive");
  return log_of(BigInt(mp::numerator(q))) - log_of(BigInt(mp::denominator(q)));
}

double to_double(const Rational& q) {
  if (q == 0) return 0.0;
  const BigInt num = mp::numerator(q);
  const BigInt den = mp::denominator(q);
  auto nb = static_cast<long>(mp::msb(mp::abs(num)));
  auto db = static_cast<long>(mp::msb(den));
  if (nb < 1000 && db < 1000) return q.convert_to<double>();
  // Rescale both to ~64 significant bits and reassemble with ldexp.
  long ns = std::max(0L, nb - 64), ds = std::max(0L, db - 64);
  double mant = BigInt(num >> ns).convert_to<double>() / BigInt(den >> ds).convert_to<double>();
  return std::ldexp(mant, static_cast<int>(std::clamp(ns - ds, -100000L, 100000L)));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

BigInt floor_mod(const BigInt& a, const BigInt& b) { return a - floor_div(a, b) * b; }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("from_double: non-finite value");
  int e = 0;
  double m = std::frexp(x, &e);
  // m in [0.5, 1): 53 bits make it an integer.
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  return Rational(BigInt(mant)) * pow2_rational(static_cast<std::int64_t>(e) - 53);
}

BigInt floor_to_bigint(double x) {
  Rational q = from_double(std::floor(x));
  return mp::numerator(q);
}

std::string to_string(const BigInt& n) { return n.str(); }

std::string to_string(const Rational& q) {
  if (mp::denominator(q) == 1) return BigInt(mp::numerator(q)).str();
  return BigInt(mp::numerator(q)).str() + "/" + BigInt(mp::denominator(q)).str();
}

std::optional<ExactVector> normalized_column(const ExactMatrix& m, Eigen::Index j) {
  Rational total = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) total += m(i, j);
  if (total == 0) return std::nullopt;
  ExactVector v(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) v(i) = m(i, j) / total;
  return v;
}

}  // namespace hyptile
