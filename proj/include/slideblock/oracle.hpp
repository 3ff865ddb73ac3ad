#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slideblock/distribution.hpp"
#include "slideblock/rngs.hpp"

namespace slideblock {

// Exhaustive enumeration is refused beyond |alphabet|^free_positions > 2^24.
inline constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 24;

// Occurrence counts of each pattern in one sample. In exclusive mode a
// position is credited only to the longest pattern occurring there (ties go
// to the earlier list entry).
std::vector<std::uint32_t> count_occurrences(const std::string& sample, const std::vector<Pattern>& patterns,
                                             Counting mode);

// Exact joint distribution by enumerating every sample of length n.
CountDistribution brute_force_joint(const std::vector<Pattern>& patterns, std::size_t n, const IidModel& model,
                                    Counting mode);

// Same, over samples of length n_total whose first symbols equal
// fixed_prefix, under the conditional i.i.d. law.
CountDistribution conditioned_brute_force(const std::string& fixed_prefix, const std::vector<Pattern>& patterns,
                                          std::size_t n_total, const IidModel& model, Counting mode);

// Every chain over the model's alphabet with 1..max_members concrete members
// of length <= max_length that validate_chain accepts, shortest chains first.
std::vector<PatternChain> enumerate_valid_chains(std::size_t max_members, std::size_t max_length,
                                                 const IidModel& model);

// Histogram of raw counts over independent samples of n generator bits.
struct EmpiricalDistribution {
  Pattern pattern;
  std::size_t n = 0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;  // counts[k] = samples with k occurrences
  std::string source;                 // generator spec text

  std::uint64_t count(std::size_t k) const { return k < counts.size() ? counts[k] : 0; }
  // Exact empirical CDF count(<= k) / trials.
  Rational cdf(std::int64_t k) const;
  double mean() const;
};

// Samples consecutive n-bit blocks from one source. Binary patterns only
// (wildcards allowed, length <= 64).
EmpiricalDistribution monte_carlo_distribution(BitSource& src, const Pattern& w, std::size_t n,
                                               std::uint64_t trials);

// With streams > 1, trial block s is drawn from the generator seeded with
// derive_worker_seed(spec.seed, s). The result depends on streams, never on
// workers.
EmpiricalDistribution monte_carlo_distribution(const GeneratorSpec& spec, const Pattern& w, std::size_t n,
                                               std::uint64_t trials, unsigned streams = 1, unsigned workers = 1);

// Binomial(n, P(w)): the independence approximation of the count law.
CountDistribution binomial_reference(const Pattern& w, std::size_t n, const IidModel& model);

struct OracleResult {
  enum class Method { kExhaustive, kMonteCarlo };
  Method method;
  std::optional<CountDistribution> exact;
  std::optional<EmpiricalDistribution> empirical;
  std::uint64_t trials = 0;
};

// Cache/CSV formats with the method and trial count in the header.
void write_oracle_result(std::ostream& os, const OracleResult& result);
void write_empirical_csv(std::ostream& os, const EmpiricalDistribution& e);

}  // namespace slideblock
