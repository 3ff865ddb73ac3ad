#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "slideblock/errors.hpp"
#include "slideblock/exactnum.hpp"
#include "slideblock/genfunc.hpp"

using namespace slideblock;

namespace {

MultiPoly poly1(std::initializer_list<std::pair<std::uint32_t, Rational>> terms) {
  MultiPoly p(1);
  for (const auto& [e, c] : terms) p.add_term({e}, c);
  return p;
}

MultiPoly poly2(std::initializer_list<std::tuple<std::uint32_t, std::uint32_t, Rational>> terms) {
  MultiPoly p(2);
  for (const auto& [a, b, c] : terms) p.add_term({a, b}, c);
  return p;
}

MultiPoly random_poly(std::mt19937& rng, std::size_t nvars, std::uint32_t max_exp, int terms) {
  std::uniform_int_distribution<std::uint32_t> exp(0, max_exp);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 7);
  MultiPoly p(nvars);
  for (int t = 0; t < terms; ++t) {
    Exponents e(nvars);
    for (auto& x : e) x = exp(rng);
    p.add_term(e, Rational(num(rng), den(rng)));
  }
  return p;
}

std::vector<Rational> random_point(std::mt19937& rng, std::size_t nvars) {
  std::uniform_int_distribution<long> num(-5, 5);
  std::uniform_int_distribution<long> den(1, 4);
  std::vector<Rational> z(nvars);
  for (auto& x : z) x = Rational(num(rng), den(rng));
  return z;
}

}  // namespace

TEST(PolyAdd, Examples) {
  auto z = MultiPoly::variable(1, 0);
  EXPECT_EQ(poly_add(poly_add(MultiPoly::constant(1, 1), z), poly1({{1, -1}})), MultiPoly::constant(1, 1));
  auto p = poly1({{0, 2}, {3, Rational(1, 5)}});
  EXPECT_EQ(poly_add(MultiPoly(1), p), p);
  auto half = poly2({{1, 1, Rational(1, 2)}});
  EXPECT_EQ(poly_add(half, half), poly2({{1, 1, 1}}));
  EXPECT_THROW(poly_add(MultiPoly(1), MultiPoly(2)), ArityMismatch);
}

TEST(PolyMul, Examples) {
  auto y_minus_1 = poly1({{1, 1}, {0, -1}});
  EXPECT_EQ(poly_mul(y_minus_1, y_minus_1), poly1({{2, 1}, {1, -2}, {0, 1}}));
  auto p = poly2({{2, 1, Rational(3, 4)}, {0, 0, 5}});
  EXPECT_EQ(poly_mul(p, MultiPoly::constant(2, 1)), p);
  auto a = poly2({{1, 0, 1}, {0, 0, -1}});  // y1 - 1
  auto b = poly2({{0, 1, 1}, {1, 0, -1}});  // y2 - y1
  EXPECT_EQ(poly_mul(a, b), poly2({{1, 1, 1}, {2, 0, -1}, {0, 1, -1}, {1, 0, 1}}));
  EXPECT_THROW(poly_mul(MultiPoly(1), MultiPoly(3)), ArityMismatch);
}

TEST(Evaluate, Examples) {
  std::vector<Rational> zero{0};
  EXPECT_EQ(evaluate(poly1({{0, 1}, {1, Rational(1, 2)}}), zero), Rational(1));
  std::vector<Rational> one{1};
  EXPECT_EQ(evaluate(poly1({{0, Rational(3, 4)}, {1, Rational(1, 4)}}), one), Rational(1));
  std::vector<Rational> wrong{1, 2};
  EXPECT_THROW(evaluate(MultiPoly(1), wrong), ArityMismatch);
}

TEST(SieveSubstitute, SingleWordExample) {
  auto fa = poly1({{0, 1}, {1, Rational(1, 4)}});
  EXPECT_EQ(sieve_substitute(fa), poly1({{0, Rational(3, 4)}, {1, Rational(1, 4)}}));
}

TEST(SieveSubstitute, TwoMemberChainExample) {
  auto fa = poly2({{0, 0, 1},
                   {1, 0, Rational(3, 2)},
                   {2, 0, Rational(3, 4)},
                   {3, 0, Rational(1, 8)},
                   {0, 1, Rational(1, 2)},
                   {1, 1, Rational(1, 4)}});
  auto expected = poly2({{0, 0, Rational(1, 8)},
                         {1, 0, Rational(1, 8)},
                         {2, 0, Rational(1, 8)},
                         {3, 0, Rational(1, 8)},
                         {0, 1, Rational(1, 4)},
                         {1, 1, Rational(1, 4)}});
  EXPECT_EQ(sieve_substitute(fa), expected);
  EXPECT_EQ(sieve_substitute(fa, 4), expected);
}

TEST(SieveSubstitute, ConstantIsUnchanged) {
  EXPECT_EQ(sieve_substitute(MultiPoly::constant(1, 1)), MultiPoly::constant(1, 1));
  EXPECT_EQ(sieve_substitute(MultiPoly::constant(3, 1)), MultiPoly::constant(3, 1));
}

TEST(SieveSubstitute, IdentityAtRandomPointsBothDirections) {
  std::mt19937 rng(20240611);
  for (std::size_t l = 1; l <= 4; ++l) {
    for (int trial = 0; trial < 25; ++trial) {
      auto fa = random_poly(rng, l, 5, 8);
      auto fb = sieve_substitute(fa);
      // z -> y: y_i = z_1 + ... + z_i + 1
      auto z = random_point(rng, l);
      std::vector<Rational> y(l);
      Rational run = 1;
      for (std::size_t i = 0; i < l; ++i) y[i] = (run += z[i]);
      ASSERT_EQ(evaluate(fa, z), evaluate(fb, y));
      // y -> z: z_1 = y_1 - 1, z_i = y_i - y_{i-1}
      auto y2 = random_point(rng, l);
      std::vector<Rational> z2(l);
      for (std::size_t i = 0; i < l; ++i) z2[i] = y2[i] - (i == 0 ? Rational(1) : y2[i - 1]);
      ASSERT_EQ(evaluate(fa, z2), evaluate(fb, y2));
    }
  }
}

TEST(SieveSubstitute, IsLinear) {
  std::mt19937 rng(7);
  for (std::size_t l = 1; l <= 3; ++l) {
    for (int trial = 0; trial < 10; ++trial) {
      auto p = random_poly(rng, l, 4, 6);
      auto q = random_poly(rng, l, 4, 6);
      ASSERT_EQ(sieve_substitute(poly_add(p, q)), poly_add(sieve_substitute(p), sieve_substitute(q)));
    }
  }
}

TEST(SieveSubstitute, SingleVariableMatchesAlternatingSum) {
  std::mt19937 rng(99);
  for (std::uint32_t degree = 0; degree <= 50; ++degree) {
    std::vector<Rational> a(degree + 1);
    MultiPoly fa(1);
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<long> den(1, 30);
    for (std::uint32_t j = 0; j <= degree; ++j) {
      a[j] = Rational(num(rng), den(rng));
      fa.add_term({j}, a[j]);
    }
    auto fb = sieve_substitute(fa);
    for (std::uint32_t k = 0; k <= degree; ++k) {
      Rational expected = 0;
      for (std::uint32_t j = k; j <= degree; ++j) {
        Rational term = Rational(binomial(j, k)) * a[j];
        expected += (j - k) % 2 ? -term : term;
      }
      ASSERT_EQ(fb.coefficient({k}), expected) << "degree " << degree << " k " << k;
    }
  }
}

TEST(PolySerialization, GradedLexRoundTrip) {
  auto p = poly2({{0, 1, Rational(1, 4)}, {1, 0, Rational(-3, 2)}, {0, 0, 1}, {2, 2, Rational(7)}});
  std::ostringstream os;
  write_poly(os, p);
  EXPECT_EQ(os.str(), "# slideblock-poly v1 nvars=2\n0,0:1/1\n0,1:1/4\n1,0:-3/2\n2,2:7/1\n");
  std::istringstream is(os.str());
  EXPECT_EQ(read_poly(is), p);
  std::istringstream bad("# something else\n");
  EXPECT_THROW(read_poly(bad), ParseError);
}

TEST(MultiPoly, DropsZeroCoefficients) {
  MultiPoly p(2);
  p.add_term({1, 1}, Rational(1, 3));
  p.add_term({1, 1}, Rational(-1, 3));
  EXPECT_TRUE(p.is_zero());
  p.add_term({0, 2}, 0);
  EXPECT_EQ(p.term_count(), 0u);
  EXPECT_THROW(p.add_term({1}, 1), ArityMismatch);
}
