#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "slideblock/exactnum.hpp"

namespace slideblock {

using Exponents = std::vector<std::uint32_t>;

// Graded lexicographic order: total degree first, then lexicographic.
struct GradedLex {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

// Sparse multivariate polynomial with exact rational coefficients. Zero
// coefficients are never stored.
class MultiPoly {
 public:
  using Terms = std::map<Exponents, Rational, GradedLex>;

  explicit MultiPoly(std::size_t nvars);

  static MultiPoly constant(std::size_t nvars, const Rational& c);
  // The variable x_index (0-based).
  static MultiPoly variable(std::size_t nvars, std::size_t index);
  static MultiPoly monomial(const Exponents& exps, const Rational& c);

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const Exponents& exps) const;
  std::uint32_t total_degree() const;

  // Adds c * x^exps in place.
  void add_term(const Exponents& exps, const Rational& c);

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(const Rational& c);
  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

 private:
  void check_arity(const MultiPoly& other) const;
  std::size_t nvars_;
  Terms terms_;
};

MultiPoly poly_add(const MultiPoly& p, const MultiPoly& q);
MultiPoly poly_mul(const MultiPoly& p, const MultiPoly& q);
MultiPoly poly_pow(const MultiPoly& p, unsigned exponent);
Rational evaluate(const MultiPoly& p, std::span<const Rational> point);

// Substitutes z_1 = y_1 - 1 and z_i = y_i - y_{i-1} (i >= 2) and expands.
// Single-variable input takes a Taylor-shift path.
MultiPoly sieve_substitute(const MultiPoly& fa, unsigned workers = 1);

// Text format: header "# slideblock-poly v1 nvars=<l>" then one
// "e1,...,el:num/den" line per term in graded-lex order.
void write_poly(std::ostream& os, const MultiPoly& p);
MultiPoly read_poly(std::istream& is);

std::string format_exponents(const Exponents& exps);
Exponents parse_exponents(const std::string& text);

}  // namespace slideblock
