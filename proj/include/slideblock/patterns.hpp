#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slideblock/errors.hpp"
#include "slideblock/exactnum.hpp"

namespace slideblock {

inline constexpr char kWildcard = '?';

// Ordered set of distinct single-character symbols (at least two).
class Alphabet {
 public:
  explicit Alphabet(std::string symbols = "01");

  static Alphabet binary() { return Alphabet("01"); }

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbols() const { return symbols_; }
  char symbol(std::size_t index) const { return symbols_[index]; }
  std::optional<std::size_t> index_of(char symbol) const;
  bool contains(char symbol) const { return index_of(symbol).has_value(); }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string symbols_;
};

// Independent identically distributed symbol model. Probabilities are exact
// and sum to one.
class IidModel {
 public:
  IidModel(Alphabet alphabet, std::vector<Rational> probs);

  static IidModel fair(Alphabet alphabet = Alphabet::binary());
  // Binary model with P('1') = p_one.
  static IidModel bernoulli(const Rational& p_one);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Rational>& probs() const { return probs_; }
  const Rational& prob(std::size_t index) const { return probs_[index]; }
  // Throws InvalidPattern for symbols outside the alphabet.
  const Rational& prob_of(char symbol) const;

  // "p0,p1,..." as exact rationals.
  std::string str() const;

  friend bool operator==(const IidModel&, const IidModel&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Rational> probs_;
};

// A word over the alphabet extended with the wildcard '?'. A concrete word
// is a pattern without wildcards.
class Pattern {
 public:
  explicit Pattern(std::string cells);

  std::size_t size() const { return cells_.size(); }
  char operator[](std::size_t i) const { return cells_[i]; }
  bool is_wildcard(std::size_t i) const { return cells_[i] == kWildcard; }
  bool is_concrete() const;
  std::size_t wildcard_count() const;
  const std::string& str() const { return cells_; }

  // Cell-wise prefix test (wildcard only equals wildcard); strict when
  // sizes differ.
  bool is_prefix_of(const Pattern& other) const;

  // Throws InvalidPattern if a concrete cell is not in the alphabet.
  void check_alphabet(const Alphabet& alphabet) const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  std::string cells_;
};

// Sum over realizations; wildcard cells contribute a factor 1.
Rational pattern_probability(const Pattern& p, const IidModel& model);

// True iff an occurrence of b starting `shift` cells after an occurrence of
// a is realizable: every overlapped pair of concrete cells agrees.
// Requires 0 <= shift < |a|.
bool compatible_at_shift(const Pattern& a, const Pattern& b, std::size_t shift);

bool is_self_nonoverlapping(const Pattern& p);

// No shift in either direction (including 0) admits simultaneous occurrences.
bool pairwise_nonoverlapping(const Pattern& a, const Pattern& b);

// 0^{m+1} (1 ?^m)^n 1 over the binary alphabet.
Pattern family_pattern(std::size_t m, std::size_t n);

// Why a candidate chain was rejected.
struct ChainViolation {
  enum class Kind { kNotPrefixChain, kSelfOverlappingMember, kCrossOverlap };
  Kind kind;
  std::size_t first;   // index into the candidate list
  std::size_t second;  // same as first for self-overlap
  std::size_t shift;   // 0 for prefix violations
  std::string describe(const std::vector<Pattern>& candidates) const;
};

const char* to_string(ChainViolation::Kind kind);

class ChainError : public Error {
 public:
  ChainError(std::vector<ChainViolation> violations, const std::vector<Pattern>& candidates);
  const std::vector<ChainViolation>& violations() const { return violations_; }
  ChainViolation::Kind kind() const { return violations_.front().kind; }
  bool has(ChainViolation::Kind kind) const;

 private:
  std::vector<ChainViolation> violations_;
};

// An increasing chain s_1 ⊏ ... ⊏ s_l where members may only coincide at a
// common start (prefix nesting); every other overlap is excluded. Instances
// only come out of validate_chain.
class PatternChain {
 public:
  std::size_t size() const { return patterns_.size(); }
  const Pattern& operator[](std::size_t i) const { return patterns_[i]; }
  const std::vector<Pattern>& patterns() const { return patterns_; }
  std::vector<std::size_t> lengths() const;
  // Comma-separated text form, e.g. "1,10".
  std::string str() const;

  friend bool operator==(const PatternChain&, const PatternChain&) = default;

 private:
  friend PatternChain validate_chain(std::vector<Pattern>, const IidModel&);
  explicit PatternChain(std::vector<Pattern> patterns) : patterns_(std::move(patterns)) {}
  std::vector<Pattern> patterns_;
};

// All violations are collected; the thrown ChainError lists every one.
PatternChain validate_chain(std::vector<Pattern> patterns, const IidModel& model);

// Parses "a,b,c" into patterns (no validation beyond non-empty cells).
std::vector<Pattern> parse_pattern_list(std::string_view text);

}  // namespace slideblock
