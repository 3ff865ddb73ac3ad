#include "slideblock/patterns.hpp"

#include <algorithm>
#include <sstream>

namespace slideblock {

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2) throw InvalidArgument("alphabet needs at least two symbols");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == kWildcard) throw InvalidArgument("'?' is reserved for the wildcard");
    if (symbols_.find(symbols_[i], i + 1) != std::string::npos)
      throw InvalidArgument(std::string("duplicate alphabet symbol '") + symbols_[i] + "'");
  }
}

std::optional<std::size_t> Alphabet::index_of(char symbol) const {
  auto pos = symbols_.find(symbol);
  if (pos == std::string::npos) return std::nullopt;
  return pos;
}

IidModel::IidModel(Alphabet alphabet, std::vector<Rational> probs)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
  if (probs_.size() != alphabet_.size())
    throw InvalidArgument("model needs one probability per alphabet symbol");
  Rational total = 0;
  for (const auto& p : probs_) {
    if (p.sign() < 0) throw InvalidArgument("negative symbol probability " + p.str());
    total += p;
  }
  if (total != Rational(1)) throw InvalidArgument("symbol probabilities sum to " + total.str());
}

IidModel IidModel::fair(Alphabet alphabet) {
  auto k = static_cast<long>(alphabet.size());
  std::vector<Rational> probs(alphabet.size(), Rational(1, k));
  return IidModel(std::move(alphabet), std::move(probs));
}

IidModel IidModel::bernoulli(const Rational& p_one) {
  return IidModel(Alphabet::binary(), {Rational(1) - p_one, p_one});
}

const Rational& IidModel::prob_of(char symbol) const {
  auto idx = alphabet_.index_of(symbol);
  if (!idx) throw InvalidPattern(std::string("symbol '") + symbol + "' is not in alphabet \"" +
                                 alphabet_.symbols() + "\"");
  return probs_[*idx];
}

std::string IidModel::str() const {
  std::string out;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (i) out += ',';
    out += probs_[i].str();
  }
  return out;
}

Pattern::Pattern(std::string cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw InvalidPattern("pattern must have at least one cell");
}

bool Pattern::is_concrete() const { return wildcard_count() == 0; }

std::size_t Pattern::wildcard_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), kWildcard));
}

bool Pattern::is_prefix_of(const Pattern& other) const {
  return size() < other.size() && other.cells_.compare(0, size(), cells_) == 0;
}

void Pattern::check_alphabet(const Alphabet& alphabet) const {
  for (char c : cells_) {
    if (c != kWildcard && !alphabet.contains(c))
      throw InvalidPattern("pattern \"" + cells_ + "\": symbol '" + c + "' is not in alphabet \"" +
                           alphabet.symbols() + "\"");
  }
}

Rational pattern_probability(const Pattern& p, const IidModel& model) {
  p.check_alphabet(model.alphabet());
  Rational prob = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!p.is_wildcard(i)) prob *= model.prob_of(p[i]);
  return prob;
}

bool compatible_at_shift(const Pattern& a, const Pattern& b, std::size_t shift) {
  std::size_t end = std::min(a.size(), shift + b.size());
  for (std::size_t i = shift; i < end; ++i) {
    if (a.is_wildcard(i) || b.is_wildcard(i - shift)) continue;
    if (a[i] != b[i - shift]) return false;
  }
  return true;
}

bool is_self_nonoverlapping(const Pattern& p) {
  for (std::size_t d = 1; d < p.size(); ++d)
    if (compatible_at_shift(p, p, d)) return false;
  return true;
}

bool pairwise_nonoverlapping(const Pattern& a, const Pattern& b) {
  for (std::size_t d = 0; d < a.size(); ++d)
    if (compatible_at_shift(a, b, d)) return false;
  for (std::size_t d = 1; d < b.size(); ++d)
    if (compatible_at_shift(b, a, d)) return false;
  return true;
}

Pattern family_pattern(std::size_t m, std::size_t n) {
  if (m < 1 || n < 1) throw InvalidArgument("family_pattern requires m >= 1 and n >= 1");
  std::string cells(m + 1, '0');
  for (std::size_t i = 0; i < n; ++i) {
    cells += '1';
    cells.append(m, kWildcard);
  }
  cells += '1';
  return Pattern(std::move(cells));
}

const char* to_string(ChainViolation::Kind kind) {
  switch (kind) {
    case ChainViolation::Kind::kNotPrefixChain: return "not-a-prefix-chain";
    case ChainViolation::Kind::kSelfOverlappingMember: return "self-overlapping-member";
    case ChainViolation::Kind::kCrossOverlap: return "cross-overlap-at-nonzero-shift";
  }
  return "unknown";
}

std::string ChainViolation::describe(const std::vector<Pattern>& candidates) const {
  std::ostringstream os;
  os << to_string(kind) << ": " << candidates[first].str();
  switch (kind) {
    case Kind::kNotPrefixChain:
      os << " is not a strict prefix of " << candidates[second].str();
      break;
    case Kind::kSelfOverlappingMember:
      os << " (overlaps itself at shift " << shift << ")";
      break;
    case Kind::kCrossOverlap:
      os << " vs " << candidates[second].str() << " at shift " << shift;
      break;
  }
  return os.str();
}

namespace {

std::string join_violations(const std::vector<ChainViolation>& violations,
                            const std::vector<Pattern>& candidates) {
  std::string msg;
  for (const auto& v : violations) {
    if (!msg.empty()) msg += "; ";
    msg += v.describe(candidates);
  }
  return msg;
}

}  // namespace

ChainError::ChainError(std::vector<ChainViolation> violations, const std::vector<Pattern>& candidates)
    : Error(join_violations(violations, candidates)), violations_(std::move(violations)) {}

bool ChainError::has(ChainViolation::Kind kind) const {
  return std::any_of(violations_.begin(), violations_.end(),
                     [kind](const ChainViolation& v) { return v.kind == kind; });
}

std::vector<std::size_t> PatternChain::lengths() const {
  std::vector<std::size_t> out;
  out.reserve(patterns_.size());
  for (const auto& p : patterns_) out.push_back(p.size());
  return out;
}

std::string PatternChain::str() const {
  std::string out;
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    if (i) out += ',';
    out += patterns_[i].str();
  }
  return out;
}

PatternChain validate_chain(std::vector<Pattern> patterns, const IidModel& model) {
  using Kind = ChainViolation::Kind;
  if (patterns.empty()) throw InvalidArgument("a chain needs at least one pattern");
  for (const auto& p : patterns) p.check_alphabet(model.alphabet());

  std::vector<ChainViolation> violations;
  for (std::size_t i = 0; i + 1 < patterns.size(); ++i)
    if (!patterns[i].is_prefix_of(patterns[i + 1]))
      violations.push_back({Kind::kNotPrefixChain, i, i + 1, 0});

  for (std::size_t i = 0; i < patterns.size(); ++i) {
    for (std::size_t d = 1; d < patterns[i].size(); ++d) {
      if (compatible_at_shift(patterns[i], patterns[i], d)) {
        violations.push_back({Kind::kSelfOverlappingMember, i, i, d});
        break;
      }
    }
  }

  // Only same-start nesting is allowed between distinct members.
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    for (std::size_t j = 0; j < patterns.size(); ++j) {
      if (i == j) continue;
      for (std::size_t d = 1; d < patterns[i].size(); ++d) {
        if (compatible_at_shift(patterns[i], patterns[j], d)) {
          violations.push_back({Kind::kCrossOverlap, i, j, d});
          break;
        }
      }
    }
  }

  if (!violations.empty()) throw ChainError(std::move(violations), patterns);
  return PatternChain(std::move(patterns));
}

std::vector<Pattern> parse_pattern_list(std::string_view text) {
  std::vector<Pattern> out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    if (piece.empty()) throw InvalidPattern("empty pattern in list \"" + std::string(text) + "\"");
    out.emplace_back(std::string(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace slideblock
