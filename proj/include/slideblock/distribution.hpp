#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "slideblock/exactnum.hpp"
#include "slideblock/genfunc.hpp"
#include "slideblock/patterns.hpp"

namespace slideblock {

enum class Counting { kExclusive, kRaw };
const char* to_string(Counting c);
Counting parse_counting(const std::string& text);

using CountVector = Exponents;

// Exact joint law of the count vector (k_1, ..., k_l) for a list of
// patterns in samples of length n. Only nonzero masses are stored.
class CountDistribution {
 public:
  using Masses = std::map<CountVector, Rational, GradedLex>;

  CountDistribution(std::vector<Pattern> patterns, std::size_t n, IidModel model, Counting counting,
                    Masses pmf = {});

  const std::vector<Pattern>& patterns() const { return patterns_; }
  std::size_t dimension() const { return patterns_.size(); }
  std::size_t n() const { return n_; }
  const IidModel& model() const { return model_; }
  Counting counting() const { return counting_; }
  const Masses& pmf() const { return pmf_; }

  Rational mass(const CountVector& k) const;
  void add_mass(const CountVector& k, const Rational& p);
  Rational total() const;
  // Largest k with nonzero mass along coordinate i.
  std::uint32_t max_count(std::size_t i) const;
  std::string patterns_text() const;

  CountDistribution marginal(std::size_t index) const;

  // Same law, masses compared exactly.
  friend bool operator==(const CountDistribution& a, const CountDistribution& b) { return a.pmf_ == b.pmf_; }

 private:
  std::vector<Pattern> patterns_;
  std::size_t n_;
  IidModel model_;
  Counting counting_;
  Masses pmf_;
};

// Multinomial(n - sum (m_i - 1) k_i; k) * prod P(s_i)^{k_i}.
Rational a_coefficient(const PatternChain& chain, std::size_t n, const IidModel& model, const CountVector& k);

// Visits every k with sum m_i k_i <= n in graded-lex-independent order.
void for_each_support_vector(const std::vector<std::size_t>& lengths, std::size_t n,
                             const std::function<void(const CountVector&)>& visit);

MultiPoly build_FA(const PatternChain& chain, std::size_t n, const IidModel& model);

// Counts where an occurrence of s_j that also starts s_{j+1} is credited to
// the longer member only. Coefficients of sieve_substitute(build_FA).
CountDistribution exclusive_joint_distribution(const PatternChain& chain, std::size_t n, const IidModel& model,
                                               unsigned workers = 1);

// Literal sliding counts N_{s_j}: r_j = k_j + ... + k_l.
CountDistribution raw_joint_distribution(const PatternChain& chain, std::size_t n, const IidModel& model,
                                         unsigned workers = 1);
CountDistribution exclusive_to_raw(const CountDistribution& exclusive);

// Direct alternating sum pmf(k) = sum_{j>=k} (-1)^{j-k} C(j,k) A(j) for a
// self-non-overlapping pattern. Depends on the pattern only through its
// length and probability.
CountDistribution single_pattern_distribution(const Pattern& w, std::size_t n, const IidModel& model,
                                              unsigned workers = 1);
std::vector<Rational> sliding_count_pmf(std::size_t n, std::size_t wlen, const Rational& prob,
                                        unsigned workers = 1);

struct MomentReport {
  std::size_t n;
  std::string pattern;
  std::size_t order;
  Rational value;
  std::size_t truncation;  // floor(n / |w|)
};

MomentReport moment(const Pattern& w, std::size_t n, const IidModel& model, std::size_t t);
Rational moment_for_probability(std::size_t n, std::size_t wlen, const Rational& prob, std::size_t t);

struct MeanVariance {
  Rational mean;
  Rational variance;
  // Set when n < 2|w| - 2, outside the range the closed form is derived for.
  bool outside_formula_domain = false;
};

MeanVariance mean_variance(const Pattern& w, std::size_t n, const IidModel& model);
MeanVariance mean_variance_for_probability(std::size_t n, std::size_t wlen, const Rational& prob);

// P(K <= k) for a one-dimensional distribution.
Rational cdf(const CountDistribution& d, std::int64_t k);

// Cache/debug text: versioned header then "k-vector:num/den" lines.
void write_distribution(std::ostream& os, const CountDistribution& d);
CountDistribution read_distribution(std::istream& is);
// Header-only text identifying the parameters (without the masses).
std::string distribution_header(const std::vector<Pattern>& patterns, std::size_t n, const IidModel& model,
                                Counting counting);

// CSV: k1..kl, probability (17 significant digits), exact.
void write_distribution_csv(std::ostream& os, const CountDistribution& d);

}  // namespace slideblock
