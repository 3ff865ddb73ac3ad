#include "slideblock/oracle.hpp"

#include <map>
#include <ostream>

#include "slideblock/errors.hpp"
#include "slideblock/parallel.hpp"

namespace slideblock {

namespace {

bool occurs_at(const std::string& sample, std::size_t pos, const Pattern& p) {
  if (pos + p.size() > sample.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!p.is_wildcard(i) && p[i] != sample[pos + i]) return false;
  return true;
}

std::uint64_t checked_space(std::size_t alphabet_size, std::size_t free_positions) {
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < free_positions; ++i) {
    space *= alphabet_size;
    if (space > kEnumerationCap)
      throw CapExceeded("exhaustive enumeration of " + std::to_string(alphabet_size) + "^" +
                        std::to_string(free_positions) + " samples exceeds the 2^24 cap");
  }
  return space;
}

// Enumerates the free suffix in lexicographic order. Each sample's weight
// depends only on its symbol histogram, so masses are accumulated as integer
// multiplicities per (count vector, histogram) and combined exactly at the end.
CountDistribution enumerate(const std::string& prefix, const std::vector<Pattern>& patterns, std::size_t n_total,
                            const IidModel& model, Counting mode) {
  if (patterns.empty()) throw InvalidArgument("need at least one pattern");
  const Alphabet& alphabet = model.alphabet();
  for (const auto& p : patterns) p.check_alphabet(alphabet);
  for (char c : prefix)
    if (!alphabet.contains(c)) throw InvalidPattern(std::string("prefix symbol '") + c + "' not in alphabet");
  if (prefix.size() > n_total) throw InvalidArgument("fixed prefix longer than the sample");
  const std::size_t free = n_total - prefix.size();
  const std::uint64_t space = checked_space(alphabet.size(), free);

  using Key = std::pair<CountVector, std::vector<std::uint32_t>>;
  std::map<Key, std::uint64_t> tally;
  std::vector<std::size_t> digits(free, 0);
  std::string sample = prefix + std::string(free, alphabet.symbol(0));
  std::vector<std::uint32_t> hist(alphabet.size(), 0);
  for (std::uint64_t s = 0; s < space; ++s) {
    std::fill(hist.begin(), hist.end(), 0);
    for (std::size_t i = 0; i < free; ++i) ++hist[digits[i]];
    auto counts = count_occurrences(sample, patterns, mode);
    ++tally[{CountVector(counts.begin(), counts.end()), hist}];
    // Lexicographic increment of the free suffix.
    for (std::size_t i = free; i-- > 0;) {
      if (++digits[i] < alphabet.size()) {
        sample[prefix.size() + i] = alphabet.symbol(digits[i]);
        break;
      }
      digits[i] = 0;
      sample[prefix.size() + i] = alphabet.symbol(0);
    }
  }

  CountDistribution out(patterns, n_total, model, mode);
  for (const auto& [key, multiplicity] : tally) {
    Rational weight(static_cast<long>(multiplicity));
    for (std::size_t a = 0; a < key.second.size(); ++a)
      if (key.second[a]) weight *= model.prob(a).pow(key.second[a]);
    out.add_mass(key.first, weight);
  }
  return out;
}

}  // namespace

std::vector<std::uint32_t> count_occurrences(const std::string& sample, const std::vector<Pattern>& patterns,
                                             Counting mode) {
  std::vector<std::uint32_t> counts(patterns.size(), 0);
  for (std::size_t pos = 0; pos < sample.size(); ++pos) {
    std::optional<std::size_t> longest;
    for (std::size_t j = 0; j < patterns.size(); ++j) {
      if (!occurs_at(sample, pos, patterns[j])) continue;
      if (mode == Counting::kRaw)
        ++counts[j];
      else if (!longest || patterns[j].size() > patterns[*longest].size())
        longest = j;
    }
    if (longest) ++counts[*longest];
  }
  return counts;
}

CountDistribution brute_force_joint(const std::vector<Pattern>& patterns, std::size_t n, const IidModel& model,
                                    Counting mode) {
  return enumerate("", patterns, n, model, mode);
}

CountDistribution conditioned_brute_force(const std::string& fixed_prefix, const std::vector<Pattern>& patterns,
                                          std::size_t n_total, const IidModel& model, Counting mode) {
  return enumerate(fixed_prefix, patterns, n_total, model, mode);
}

Rational EmpiricalDistribution::cdf(std::int64_t k) const {
  if (trials == 0) throw InvalidArgument("empty empirical distribution");
  std::uint64_t below = 0;
  for (std::size_t i = 0; i < counts.size() && static_cast<std::int64_t>(i) <= k; ++i) below += counts[i];
  return Rational(BigInt(std::to_string(below)), BigInt(std::to_string(trials)));
}

double EmpiricalDistribution::mean() const {
  if (trials == 0) return 0.0;
  long double sum = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) sum += static_cast<long double>(k) * counts[k];
  return static_cast<double>(sum / trials);
}

namespace {

struct BinaryMatcher {
  std::uint64_t care = 0;   // 1 where the pattern cell is concrete
  std::uint64_t value = 0;  // required bits at concrete cells
  std::uint64_t window_mask = 0;
  std::size_t length = 0;
};

BinaryMatcher make_matcher(const Pattern& w) {
  if (w.size() > 64) throw InvalidPattern("Monte Carlo patterns are limited to 64 cells");
  w.check_alphabet(Alphabet::binary());
  BinaryMatcher m;
  m.length = w.size();
  m.window_mask = w.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w.size()) - 1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    // Most recent bit sits at bit 0 of the window, so cell 0 is the highest.
    std::uint64_t bit = std::uint64_t{1} << (w.size() - 1 - i);
    if (w.is_wildcard(i)) continue;
    m.care |= bit;
    if (w[i] == '1') m.value |= bit;
  }
  return m;
}

template <typename Gen>
void sample_into(Gen& gen, const ExtractionPolicy& policy, std::uint64_t half_range, const BinaryMatcher& m,
                 std::size_t n, std::uint64_t trials, std::vector<std::uint64_t>& counts) {
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t window = 0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      window = ((window << 1) | extract_bit(gen.next(), policy, half_range)) & m.window_mask;
      if (i + 1 >= m.length && (window & m.care) == m.value) ++hits;
    }
    ++counts[hits];
  }
}

}  // namespace

EmpiricalDistribution monte_carlo_distribution(BitSource& src, const Pattern& w, std::size_t n,
                                               std::uint64_t trials) {
  if (trials == 0) throw InvalidArgument("trials must be positive");
  BinaryMatcher m = make_matcher(w);
  EmpiricalDistribution e{w, n, trials, std::vector<std::uint64_t>(n + 1, 0), src.spec().str()};
  const auto policy = src.spec().policy;
  const auto half = src.half_range();
  src.visit([&](auto& gen) { sample_into(gen, policy, half, m, n, trials, e.counts); });
  while (e.counts.size() > 1 && e.counts.back() == 0) e.counts.pop_back();
  return e;
}

EmpiricalDistribution monte_carlo_distribution(const GeneratorSpec& spec, const Pattern& w, std::size_t n,
                                               std::uint64_t trials, unsigned streams, unsigned workers) {
  if (streams <= 1) {
    BitSource src(spec);
    return monte_carlo_distribution(src, w, n, trials);
  }
  if (trials == 0) throw InvalidArgument("trials must be positive");
  std::vector<EmpiricalDistribution> parts(streams, EmpiricalDistribution{w, n, 0, {}, {}});
  parallel_for(streams, workers, [&](std::size_t s) {
    std::uint64_t share = trials / streams + (s < trials % streams ? 1 : 0);
    if (share == 0) return;
    GeneratorSpec sub = spec;
    sub.seed = derive_worker_seed(spec.seed, static_cast<std::uint32_t>(s));
    BitSource src(sub);
    parts[s] = monte_carlo_distribution(src, w, n, share);
  });
  EmpiricalDistribution out{w, n, trials, std::vector<std::uint64_t>(n + 1, 0),
                            spec.str() + ":streams=" + std::to_string(streams)};
  for (const auto& part : parts)
    for (std::size_t k = 0; k < part.counts.size(); ++k) out.counts[k] += part.counts[k];
  while (out.counts.size() > 1 && out.counts.back() == 0) out.counts.pop_back();
  return out;
}

CountDistribution binomial_reference(const Pattern& w, std::size_t n, const IidModel& model) {
  if (!w.is_concrete()) throw InvalidPattern("binomial reference needs a concrete word");
  Rational p = pattern_probability(w, model);
  Rational q = Rational(1) - p;
  CountDistribution out({w}, n, model, Counting::kRaw);
  for (std::size_t k = 0; k <= n; ++k) {
    Rational mass = Rational(binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(k))) *
                    p.pow(k) * q.pow(n - k);
    out.add_mass({static_cast<std::uint32_t>(k)}, mass);
  }
  return out;
}

void write_oracle_result(std::ostream& os, const OracleResult& result) {
  const bool exhaustive = result.method == OracleResult::Method::kExhaustive;
  if (exhaustive) {
    if (!result.exact) throw InvalidArgument("exhaustive oracle result without a distribution");
    write_distribution(os, *result.exact);
    return;
  }
  if (!result.empirical) throw InvalidArgument("Monte Carlo oracle result without a histogram");
  const auto& e = *result.empirical;
  os << "# slideblock-empirical v1\n# method=monte-carlo\n# trials=" << e.trials << "\n# source=" << e.source
     << "\n# patterns=" << e.pattern.str() << "\n# n=" << e.n << '\n';
  for (std::size_t k = 0; k < e.counts.size(); ++k)
    if (e.counts[k]) os << k << ':' << e.counts[k] << '/' << e.trials << '\n';
}

void write_empirical_csv(std::ostream& os, const EmpiricalDistribution& e) {
  os << "# method=monte-carlo trials=" << e.trials << " source=" << e.source << '\n';
  os << "k1,count,frequency\n";
  for (std::size_t k = 0; k < e.counts.size(); ++k) {
    if (!e.counts[k]) continue;
    Rational f(BigInt(std::to_string(e.counts[k])), BigInt(std::to_string(e.trials)));
    os << k << ',' << e.counts[k] << ',' << f.to_decimal(17) << '\n';
  }
}

std::vector<PatternChain> enumerate_valid_chains(std::size_t max_members, std::size_t max_length,
                                                 const IidModel& model) {
  const std::string& symbols = model.alphabet().symbols();
  std::vector<Pattern> words;
  std::vector<std::string> layer = {""};
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<std::string> grown;
    for (const auto& prefix : layer)
      for (char c : symbols) grown.push_back(prefix + c);
    for (const auto& w : grown)
      if (is_self_nonoverlapping(Pattern(w))) words.emplace_back(w);
    layer = std::move(grown);
  }

  std::vector<PatternChain> out;
  std::vector<std::vector<Pattern>> level;
  for (const auto& w : words) level.push_back({w});
  for (std::size_t members = 1; members <= max_members && !level.empty(); ++members) {
    std::vector<std::vector<Pattern>> next;
    for (const auto& cand : level) {
      try {
        out.push_back(validate_chain(cand, model));
      } catch (const ChainError&) {
        continue;
      }
      if (members == max_members) continue;
      for (const auto& w : words) {
        if (!cand.back().is_prefix_of(w)) continue;
        auto ext = cand;
        ext.push_back(w);
        next.push_back(std::move(ext));
      }
    }
    level = std::move(next);
  }
  return out;
}

}  // namespace slideblock
