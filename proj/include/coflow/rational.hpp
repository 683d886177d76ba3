#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace coflow {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in a signed 64-bit word are
/// stored inline; anything larger is promoted to a shared immutable GMP
/// rational and demoted again as soon as a result fits. Copies are cheap in
/// both representations.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) { normalize_int(value); }  // NOLINT
  Rational(int value) : Rational(static_cast<std::int64_t>(value)) {}   // NOLINT
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(const mpq_class& value);

  /// Parses "p", "-p", "p/q". Throws std::invalid_argument on malformed text
  /// or a zero denominator.
  static Rational parse(std::string_view text);

  /// Lossless rendering: "p" for integers, "p/q" otherwise.
  std::string str() const;

  mpq_class to_mpq() const;
  mpz_class numerator() const;
  mpz_class denominator() const;

  double to_double() const;
  int sign() const;
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;
  bool is_small() const { return !big_; }

  /// Floor and ceiling as 64-bit integers. Throws std::overflow_error when the
  /// result does not fit.
  std::int64_t floor_int() const;
  std::int64_t ceil_int() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return compare(a, b) > 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return compare(a, b) >= 0; }

  static int compare(const Rational& a, const Rational& b);

 private:
  void normalize_int(std::int64_t value);
  void assign_big(mpq_class value);
  void assign_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

Rational abs(const Rational& q);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Decimal rendering with the given number of significant digits; display only.
std::string to_decimal(const Rational& q, int significant_digits = 6);

/// Rigorous bracket lo <= log2(q) <= hi for q > 0. When q is an exact power of
/// two the bracket collapses to the exact value.
struct Log2Bracket {
  Rational lo;
  Rational hi;
  bool exact() const { return lo == hi; }
};
Log2Bracket log2_bracket(const Rational& q, unsigned precision_bits = 12);

/// Bracket for log(x) / log(base) with x, base > 1. Exact when x is an integer
/// power of base.
Log2Bracket log_ratio_bracket(const Rational& x, const Rational& base,
                              unsigned precision_bits = 12);

}  // namespace coflow
