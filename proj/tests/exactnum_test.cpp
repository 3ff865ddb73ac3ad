#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "slideblock/errors.hpp"
#include "slideblock/exactnum.hpp"

using namespace slideblock;

namespace {

BigInt factorial(long n) {
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

BigInt gmp_binomial(long n, long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// Surjections by the recurrence S(t,s) = s * (S(t-1,s) + S(t-1,s-1)).
BigInt surjections_by_recurrence(long t, long s) {
  std::vector<std::vector<BigInt>> table(t + 1, std::vector<BigInt>(s + 1, 0));
  table[0][0] = 1;
  for (long i = 1; i <= t; ++i)
    for (long j = 1; j <= s; ++j) table[i][j] = BigInt(j) * (table[i - 1][j] + table[i - 1][j - 1]);
  return table[t][s];
}

}  // namespace

TEST(Binomial, Examples) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(7, 9), 0);
  EXPECT_EQ(binomial(498, 2), 123753);
  EXPECT_EQ(binomial(4, -1), 0);
  EXPECT_EQ(binomial(0, 0), 1);
  EXPECT_THROW(binomial(-1, 0), InvalidArgument);
}

TEST(Binomial, MatchesGmpAndIsSymmetric) {
  for (long n = 0; n <= 80; ++n) {
    for (long k = 0; k <= n; ++k) {
      ASSERT_EQ(binomial(n, k), gmp_binomial(n, k)) << n << " " << k;
      ASSERT_EQ(binomial(n, k), binomial(n, n - k));
    }
  }
  EXPECT_EQ(binomial(1600, 800), gmp_binomial(1600, 800));
}

TEST(Multinomial, Examples) {
  std::vector<std::int64_t> a{1, 1}, b{0, 1}, c{0, 2};
  EXPECT_EQ(multinomial(2, a), 2);
  EXPECT_EQ(multinomial(3, b), 3);
  EXPECT_EQ(multinomial(1, c), 0);
  EXPECT_EQ(multinomial(5, std::vector<std::int64_t>{}), 1);
}

TEST(Multinomial, EqualsFactorialQuotientAndBinomialProduct) {
  for (long N = 0; N <= 14; ++N) {
    for (long k1 = 0; k1 <= N; ++k1) {
      for (long k2 = 0; k1 + k2 <= N; ++k2) {
        for (long k3 = 0; k1 + k2 + k3 <= N; ++k3) {
          std::vector<std::int64_t> parts{k1, k2, k3};
          BigInt expected = factorial(N) / (factorial(k1) * factorial(k2) * factorial(k3) * factorial(N - k1 - k2 - k3));
          // Choose positions part by part from the full sample.
          BigInt chained = binomial(N, k1) * binomial(N - k1, k2) * binomial(N - k1 - k2, k3);
          ASSERT_EQ(multinomial(N, parts), expected);
          ASSERT_EQ(multinomial(N, parts), chained);
        }
      }
    }
  }
}

TEST(Surjections, Examples) {
  EXPECT_EQ(surjections(3, 3), 6);
  EXPECT_EQ(surjections(3, 2), 6);
  EXPECT_EQ(surjections(2, 3), 0);
  EXPECT_EQ(surjections(1, 1), 1);
}

TEST(Surjections, ClassicalIdentityAndRecurrence) {
  for (long t = 1; t <= 8; ++t) {
    for (long m = 1; m <= 8; ++m) {
      BigInt sum = 0;
      for (long s = 1; s <= t; ++s) sum += surjections(t, s) * binomial(m, s);
      BigInt power;
      mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(t));
      ASSERT_EQ(sum, power) << "t=" << t << " m=" << m;
    }
    for (long s = 1; s <= 10; ++s) ASSERT_EQ(surjections(t, s), surjections_by_recurrence(t, s));
  }
}

TEST(Rational, LowestTermsAndFormatting) {
  Rational r(BigInt(6), BigInt(-16));
  EXPECT_EQ(r.str(), "-3/8");
  EXPECT_EQ(r.denominator(), 8);
  EXPECT_EQ(Rational(1).str(), "1/1");
  EXPECT_EQ(Rational(3, 8).to_decimal(4), "3.750e-01");
  EXPECT_THROW(Rational(BigInt(1), BigInt(0)), InvalidArgument);
  EXPECT_THROW(Rational(1) / Rational(0), InvalidArgument);
}

TEST(Rational, ParsesExactly) {
  EXPECT_EQ(Rational::parse("0.25"), Rational(1, 4));
  EXPECT_EQ(Rational::parse("1/3"), Rational(1, 3));
  EXPECT_EQ(Rational::parse("-2/6"), Rational(-1, 3));
  EXPECT_EQ(Rational::parse("3"), Rational(3));
  EXPECT_EQ(Rational::parse("1e-3"), Rational(1, 1000));
  EXPECT_EQ(Rational::parse(".5"), Rational(1, 2));
  EXPECT_THROW(Rational::parse(""), ParseError);
  EXPECT_THROW(Rational::parse("1/0"), ParseError);
  EXPECT_THROW(Rational::parse("abc"), ParseError);
  EXPECT_THROW(Rational::parse("0.5x"), ParseError);
}

TEST(Rational, DecimalRenderingBeyondDoubleRange) {
  Rational tiny = Rational(1, 2).pow(1600);
  EXPECT_EQ(tiny.to_double(), 0.0);
  // 2^-1600 = 2.2504...e-482
  EXPECT_EQ(tiny.to_decimal(5).substr(0, 6), "2.2491");
  EXPECT_NE(tiny.to_decimal(5).find("e-482"), std::string::npos);
}

TEST(Rational, SumByCommonDenominatorEqualsCrossMultiplication) {
  for (long a = -7; a <= 7; ++a)
    for (long b = 1; b <= 9; ++b)
      for (long c = -5; c <= 5; ++c)
        for (long d = 1; d <= 7; ++d) {
          Rational cross(BigInt(a * d + c * b), BigInt(b * d));
          long l = std::lcm(b, d);
          Rational common(BigInt(a * (l / b) + c * (l / d)), BigInt(l));
          ASSERT_EQ(Rational(a, b) + Rational(c, d), cross);
          ASSERT_EQ(cross, common);
        }
}
