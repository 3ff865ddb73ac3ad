#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace slideblock {

using BigInt = mpz_class;

// Exact rational number, always kept in lowest terms with a positive
// denominator. Backed by GMP's mpq.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const BigInt& value) : value_(value) {}
  Rational(const BigInt& num, const BigInt& den);
  Rational(long num, long den) : Rational(BigInt(num), BigInt(den)) {}

  // Accepts "a", "a/b", and finite decimals such as "-0.25" or "1e-3".
  // Decimals are converted exactly: "0.25" is 25/100 = 1/4.
  static Rational parse(std::string_view text);

  BigInt numerator() const { return value_.get_num(); }
  BigInt denominator() const { return value_.get_den(); }
  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  Rational pow(unsigned long exponent) const;
  Rational abs() const;

  // "num/den" in lowest terms; integers render as "k/1".
  std::string str() const;
  // Scientific rendering with the given number of significant digits.
  // Works far outside double range (e.g. 2^-1600).
  std::string to_decimal(int significant_digits = 17) const;
  // Nearest-ish double; values below the double range become 0.
  double to_double() const;

  const mpq_class& raw() const { return value_; }

 private:
  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// C(n, k); 0 when k < 0 or k > n. Requires n >= 0.
BigInt binomial(std::int64_t n, std::int64_t k);

// N! / (k_1! ... k_l! (N - sum k)!); 0 when the parts exceed N.
BigInt multinomial(std::int64_t total, std::span<const std::int64_t> parts);

// Number of surjections {1..t} -> {1..s}; 0 when s > t.
BigInt surjections(std::int64_t t, std::int64_t s);

}  // namespace slideblock
