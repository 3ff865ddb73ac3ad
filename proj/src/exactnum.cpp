#include "slideblock/exactnum.hpp"

#include <cctype>
#include <ostream>
#include <vector>

#include "slideblock/errors.hpp"

namespace slideblock {

Rational::Rational(const BigInt& num, const BigInt& den) : value_(num, den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  value_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw InvalidArgument("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::operator-() const {
  Rational r;
  r.value_ = -value_;
  return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::pow(unsigned long exponent) const {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), exponent);
  // Powers of a reduced fraction stay reduced.
  Rational r;
  r.value_ = mpq_class(num, den);
  return r;
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

std::string Rational::str() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::to_decimal(int significant_digits) const {
  if (significant_digits < 1) significant_digits = 1;
  if (is_zero()) return "0";
  // Enough mantissa bits for the requested digits plus guard bits.
  mp_bitcnt_t bits = static_cast<mp_bitcnt_t>(significant_digits) * 4 + 64;
  mpf_class f(0, bits);
  f = value_;
  std::vector<char> buf(static_cast<std::size_t>(significant_digits) + 64);
  gmp_snprintf(buf.data(), buf.size(), "%.*Fe", significant_digits - 1, f.get_mpf_t());
  return std::string(buf.data());
}

double Rational::to_double() const { return value_.get_d(); }

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto fail = [&]() -> Rational { throw ParseError("not a rational number: '" + s + "'"); };
  if (s.empty()) return fail();
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpz_class num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
      return fail();
    if (den == 0) return fail();
    return Rational(num, den);
  }
  // Decimal: [sign] digits [. digits] [e|E [sign] digits]
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    digits += s[i++];
    seen_digit = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i++];
      --scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) return fail();
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::string exp;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) exp += s[i++];
    bool exp_digit = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      exp += s[i++];
      exp_digit = true;
    }
    if (!exp_digit || exp.size() > 7) return fail();
    scale += std::stol(exp);
  }
  if (i != s.size()) return fail();
  mpz_class num(digits, 10);
  if (negative) num = -num;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  if (scale >= 0) return Rational(num * ten_pow, 1);
  return Rational(num, ten_pow);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (n < 0) throw InvalidArgument("binomial: n must be nonnegative");
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  // r = C(n-k+i, i) after step i; each division is exact.
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= static_cast<unsigned long>(n - k + i);
    mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(i));
  }
  return r;
}

BigInt multinomial(std::int64_t total, std::span<const std::int64_t> parts) {
  if (total < 0) throw InvalidArgument("multinomial: total must be nonnegative");
  std::int64_t used = 0;
  for (auto p : parts) {
    if (p < 0) throw InvalidArgument("multinomial: parts must be nonnegative");
    used += p;
  }
  if (used > total) return 0;
  // Grow the arrangement one slot at a time: placed counts the cells so far,
  // starting from the (total - used) unlabelled cells.
  BigInt r = 1;
  std::int64_t placed = total - used;
  for (auto p : parts) {
    for (std::int64_t i = 1; i <= p; ++i) {
      ++placed;
      r *= static_cast<unsigned long>(placed);
      mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(i));
    }
  }
  return r;
}

BigInt surjections(std::int64_t t, std::int64_t s) {
  if (t < 1 || s < 1) throw InvalidArgument("surjections: t and s must be positive");
  if (s > t) return 0;
  BigInt sum = 0;
  for (std::int64_t r = 0; r <= s; ++r) {
    BigInt term;
    mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(t));
    term *= binomial(s, r);
    if ((s - r) % 2 == 0)
      sum += term;
    else
      sum -= term;
  }
  return sum;
}

}  // namespace slideblock
