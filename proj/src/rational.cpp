#include "coflow/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace coflow {

namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

using u128 = unsigned __int128;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    if ((a >> 64) == 0 && (b >> 64) == 0) {
      return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    }
    u128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

mpz_class mpz_from(__int128 value) {
  const bool negative = value < 0;
  u128 magnitude = negative ? static_cast<u128>(-(value + 1)) + 1 : static_cast<u128>(value);
  mpz_class hi(static_cast<unsigned long>(magnitude >> 64));
  mpz_class lo(static_cast<unsigned long>(magnitude & ~std::uint64_t{0}));
  mpz_class result = (hi << 64) + lo;
  return negative ? mpz_class(-result) : result;
}

bool fits_small(const mpz_class& z) {
  if (!mpz_fits_slong_p(z.get_mpz_t())) return false;
  return z.get_si() != std::numeric_limits<long>::min();
}

// bit length of |z|, z != 0
unsigned long bit_length(const mpz_class& z) { return mpz_sizeinbase(z.get_mpz_t(), 2); }

bool is_power_of_two(const mpz_class& z) {
  return z > 0 && mpz_popcount(z.get_mpz_t()) == 1;
}

// lo <= log2(z) <= hi for an integer z >= 1.
Log2Bracket log2_integer(const mpz_class& z, unsigned precision_bits) {
  if (is_power_of_two(z)) {
    Rational exact(static_cast<std::int64_t>(bit_length(z) - 1));
    return {exact, exact};
  }
  const unsigned long scale = 1UL << precision_bits;
  mpz_class raised;
  mpz_pow_ui(raised.get_mpz_t(), z.get_mpz_t(), scale);
  // 2^(L-1) <= z^scale < 2^L
  const auto length = static_cast<std::int64_t>(bit_length(raised));
  const auto s = static_cast<std::int64_t>(scale);
  return {Rational(length - 1, s), Rational(length, s)};
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  assign_wide(num, den);
}

Rational::Rational(const mpq_class& value) {
  mpq_class canonical(value);
  canonical.canonicalize();
  assign_big(std::move(canonical));
}

void Rational::normalize_int(std::int64_t value) {
  if (value == std::numeric_limits<std::int64_t>::min()) {
    assign_big(mpq_class(mpz_from(value)));
  }
}

void Rational::assign_big(mpq_class value) {
  if (fits_small(value.get_num()) && fits_small(value.get_den())) {
    num_ = value.get_num().get_si();
    den_ = value.get_den().get_si();
    big_.reset();
    return;
  }
  num_ = 0;
  den_ = 1;
  big_ = std::make_shared<const mpq_class>(std::move(value));
}

void Rational::assign_wide(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const u128 magnitude = num < 0 ? static_cast<u128>(-num) : static_cast<u128>(num);
  const u128 g = num == 0 ? static_cast<u128>(den) : gcd128(magnitude, static_cast<u128>(den));
  num /= static_cast<__int128>(g);
  den /= static_cast<__int128>(g);
  if (num >= -kMax && num <= kMax && den <= kMax) {
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
    big_.reset();
    return;
  }
  mpq_class q(mpz_from(num), mpz_from(den));
  assign_big(std::move(q));
}

Rational Rational::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto valid_integer = [](std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  const auto slash = text.find('/');
  std::string_view num_text = text.substr(0, slash);
  std::string_view den_text = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!valid_integer(num_text, true) || !valid_integer(den_text, false)) {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  }
  std::string num_str(num_text);
  if (num_str.front() == '+') num_str.erase(0, 1);
  mpz_class num(num_str, 10);
  mpz_class den(std::string(den_text), 10);
  if (den == 0) throw std::invalid_argument("rational with zero denominator: '" + std::string(text) + "'");
  mpq_class q(num, den);
  q.canonicalize();
  return Rational(q);
}

std::string Rational::str() const {
  if (big_) {
    if (big_->get_den() == 1) return big_->get_num().get_str();
    return big_->get_num().get_str() + "/" + big_->get_den().get_str();
  }
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q(mpz_from(num_), mpz_from(den_));
  return q;
}

mpz_class Rational::numerator() const { return big_ ? big_->get_num() : mpz_from(num_); }
mpz_class Rational::denominator() const { return big_ ? big_->get_den() : mpz_from(den_); }

double Rational::to_double() const {
  if (big_) return big_->get_d();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

std::int64_t Rational::floor_int() const {
  if (!big_) {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
  if (!mpz_fits_slong_p(q.get_mpz_t())) throw std::overflow_error("floor does not fit in 64 bits");
  return q.get_si();
}

std::int64_t Rational::ceil_int() const {
  if (!big_) {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
  }
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
  if (!mpz_fits_slong_p(q.get_mpz_t())) throw std::overflow_error("ceiling does not fit in 64 bits");
  return q.get_si();
}

Rational Rational::operator-() const {
  Rational r;
  if (big_) {
    r.assign_big(mpq_class(-*big_));
  } else {
    r.num_ = -num_;
    r.den_ = den_;
  }
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    const std::int64_t g = std::gcd(den_, rhs.den_);
    const __int128 num = static_cast<__int128>(num_) * (rhs.den_ / g) +
                         static_cast<__int128>(rhs.num_) * (den_ / g);
    const __int128 den = static_cast<__int128>(den_) * (rhs.den_ / g);
    assign_wide(num, den);
    return *this;
  }
  assign_big(to_mpq() + rhs.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    const std::int64_t g = std::gcd(den_, rhs.den_);
    const __int128 num = static_cast<__int128>(num_) * (rhs.den_ / g) -
                         static_cast<__int128>(rhs.num_) * (den_ / g);
    const __int128 den = static_cast<__int128>(den_) * (rhs.den_ / g);
    assign_wide(num, den);
    return *this;
  }
  assign_big(to_mpq() - rhs.to_mpq());
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    assign_wide(static_cast<__int128>(num_) * rhs.num_, static_cast<__int128>(den_) * rhs.den_);
    return *this;
  }
  assign_big(to_mpq() * rhs.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("rational division by zero");
  if (!big_ && !rhs.big_) {
    assign_wide(static_cast<__int128>(num_) * rhs.den_, static_cast<__int128>(den_) * rhs.num_);
    return *this;
  }
  assign_big(to_mpq() / rhs.to_mpq());
  return *this;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  // canonical forms: a small value never equals a promoted one
  return false;
}

int Rational::compare(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return (lhs > rhs) - (lhs < rhs);
  }
  return cmp(a.to_mpq(), b.to_mpq());
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::string to_decimal(const Rational& q, int significant_digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", significant_digits, q.to_double());
  return buffer;
}

Log2Bracket log2_bracket(const Rational& q, unsigned precision_bits) {
  if (q.sign() <= 0) throw std::domain_error("log2 of a non-positive rational");
  if (precision_bits > 16) precision_bits = 16;
  const Log2Bracket num = log2_integer(q.numerator(), precision_bits);
  const Log2Bracket den = log2_integer(q.denominator(), precision_bits);
  return {num.lo - den.hi, num.hi - den.lo};
}

Log2Bracket log_ratio_bracket(const Rational& x, const Rational& base, unsigned precision_bits) {
  if (x <= Rational(1) || base <= Rational(1)) {
    throw std::domain_error("log ratio needs both arguments above 1");
  }
  {
    Rational power = base;
    for (std::int64_t k = 1; k <= 256 && power <= x; ++k) {
      if (power == x) return {Rational(k), Rational(k)};
      power *= base;
    }
  }
  const Log2Bracket lx = log2_bracket(x, precision_bits);
  const Log2Bracket lb = log2_bracket(base, precision_bits);
  if (lb.lo.sign() <= 0) throw std::domain_error("log ratio base too close to 1");
  return {lx.lo / lb.hi, lx.hi / lb.lo};
}

}  // namespace coflow
