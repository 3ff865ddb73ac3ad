#include "slideblock/genfunc.hpp"

#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "slideblock/errors.hpp"
#include "slideblock/parallel.hpp"

namespace slideblock {

bool GradedLex::operator()(const Exponents& a, const Exponents& b) const {
  auto da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  auto db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
  if (da != db) return da < db;
  return a < b;
}

MultiPoly::MultiPoly(std::size_t nvars) : nvars_(nvars) {
  if (nvars == 0) throw InvalidArgument("polynomial needs at least one variable");
}

MultiPoly MultiPoly::constant(std::size_t nvars, const Rational& c) {
  MultiPoly p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw ArityMismatch("variable index out of range");
  Exponents e(nvars, 0);
  e[index] = 1;
  return monomial(e, 1);
}

MultiPoly MultiPoly::monomial(const Exponents& exps, const Rational& c) {
  MultiPoly p(exps.size());
  p.add_term(exps, c);
  return p;
}

Rational MultiPoly::coefficient(const Exponents& exps) const {
  if (exps.size() != nvars_) throw ArityMismatch("exponent vector length differs from nvars");
  auto it = terms_.find(exps);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::uint32_t MultiPoly::total_degree() const {
  if (terms_.empty()) return 0;
  const auto& e = terms_.rbegin()->first;
  return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

void MultiPoly::add_term(const Exponents& exps, const Rational& c) {
  if (exps.size() != nvars_) throw ArityMismatch("exponent vector length differs from nvars");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void MultiPoly::check_arity(const MultiPoly& other) const {
  if (other.nvars_ != nvars_)
    throw ArityMismatch("polynomials in " + std::to_string(nvars_) + " and " +
                        std::to_string(other.nvars_) + " variables");
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  check_arity(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  check_arity(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly poly_add(const MultiPoly& p, const MultiPoly& q) {
  MultiPoly r = p;
  r += q;
  return r;
}

MultiPoly poly_mul(const MultiPoly& p, const MultiPoly& q) {
  if (p.nvars() != q.nvars())
    throw ArityMismatch("polynomials in " + std::to_string(p.nvars()) + " and " +
                        std::to_string(q.nvars()) + " variables");
  MultiPoly r(p.nvars());
  Exponents e(p.nvars());
  for (const auto& [ep, cp] : p.terms()) {
    for (const auto& [eq, cq] : q.terms()) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ep[i] + eq[i];
      r.add_term(e, cp * cq);
    }
  }
  return r;
}

MultiPoly poly_pow(const MultiPoly& p, unsigned exponent) {
  MultiPoly result = MultiPoly::constant(p.nvars(), 1);
  MultiPoly base = p;
  while (exponent) {
    if (exponent & 1u) result = poly_mul(result, base);
    exponent >>= 1;
    if (exponent) base = poly_mul(base, base);
  }
  return result;
}

Rational evaluate(const MultiPoly& p, std::span<const Rational> point) {
  if (point.size() != p.nvars())
    throw ArityMismatch("point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                        std::to_string(p.nvars()) + " variables");
  Rational sum = 0;
  for (const auto& [e, c] : p.terms()) {
    Rational term = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term *= point[i].pow(e[i]);
    sum += term;
  }
  return sum;
}

namespace {

// f(y) = F(y - 1) by repeated synthetic division (Taylor shift); additions only.
MultiPoly taylor_shift_minus_one(const MultiPoly& fa) {
  std::uint32_t degree = fa.total_degree();
  std::vector<Rational> c(degree + 1);
  for (const auto& [e, v] : fa.terms()) c[e[0]] = v;
  for (std::uint32_t i = 0; i < degree; ++i) {
    for (std::uint32_t j = degree; j > i; --j) c[j - 1] -= c[j];
  }
  MultiPoly out(1);
  for (std::uint32_t k = 0; k <= degree; ++k) out.add_term({k}, c[k]);
  return out;
}

}  // namespace

MultiPoly sieve_substitute(const MultiPoly& fa, unsigned workers) {
  const std::size_t l = fa.nvars();
  if (l == 1) return taylor_shift_minus_one(fa);

  // factor_i = y_i - y_{i-1}, with y_0 = 1.
  std::vector<MultiPoly> factors;
  factors.reserve(l);
  for (std::size_t i = 0; i < l; ++i) {
    MultiPoly f = MultiPoly::variable(l, i);
    f -= i == 0 ? MultiPoly::constant(l, 1) : MultiPoly::variable(l, i - 1);
    factors.push_back(std::move(f));
  }
  std::vector<std::uint32_t> max_exp(l, 0);
  for (const auto& [e, c] : fa.terms())
    for (std::size_t i = 0; i < l; ++i) max_exp[i] = std::max(max_exp[i], e[i]);
  std::vector<std::vector<MultiPoly>> powers(l);
  for (std::size_t i = 0; i < l; ++i) {
    powers[i].push_back(MultiPoly::constant(l, 1));
    for (std::uint32_t k = 1; k <= max_exp[i]; ++k) powers[i].push_back(poly_mul(powers[i].back(), factors[i]));
  }

  std::vector<const std::pair<const Exponents, Rational>*> monomials;
  monomials.reserve(fa.term_count());
  for (const auto& t : fa.terms()) monomials.push_back(&t);
  std::vector<MultiPoly> expanded(monomials.size(), MultiPoly(l));
  parallel_for(monomials.size(), workers, [&](std::size_t idx) {
    const auto& [e, c] = *monomials[idx];
    MultiPoly term = MultiPoly::constant(l, c);
    for (std::size_t i = 0; i < l; ++i)
      if (e[i]) term = poly_mul(term, powers[i][e[i]]);
    expanded[idx] = std::move(term);
  });
  // Fixed accumulation order keeps the result independent of worker count.
  MultiPoly result(l);
  for (const auto& term : expanded) result += term;
  return result;
}

std::string format_exponents(const Exponents& exps) {
  std::string out;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(exps[i]);
  }
  return out;
}

Exponents parse_exponents(const std::string& text) {
  Exponents out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (piece.empty() || piece.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad exponent vector '" + text + "'");
    out.push_back(static_cast<std::uint32_t>(std::stoul(piece)));
  }
  if (out.empty()) throw ParseError("empty exponent vector");
  return out;
}

void write_poly(std::ostream& os, const MultiPoly& p) {
  os << "# slideblock-poly v1 nvars=" << p.nvars() << '\n';
  for (const auto& [e, c] : p.terms()) os << format_exponents(e) << ':' << c.str() << '\n';
}

MultiPoly read_poly(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("missing polynomial header");
  const std::string prefix = "# slideblock-poly v1 nvars=";
  if (line.rfind(prefix, 0) != 0) throw ParseError("unsupported polynomial header: " + line);
  std::size_t nvars = std::stoul(line.substr(prefix.size()));
  MultiPoly p(nvars);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("bad polynomial term: " + line);
    p.add_term(parse_exponents(line.substr(0, colon)), Rational::parse(line.substr(colon + 1)));
  }
  return p;
}

}  // namespace slideblock
