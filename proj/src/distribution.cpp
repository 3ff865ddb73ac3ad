#include "slideblock/distribution.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "slideblock/errors.hpp"
#include "slideblock/parallel.hpp"

namespace slideblock {

const char* to_string(Counting c) { return c == Counting::kExclusive ? "exclusive" : "raw"; }

Counting parse_counting(const std::string& text) {
  if (text == "exclusive") return Counting::kExclusive;
  if (text == "raw") return Counting::kRaw;
  throw ParseError("unknown counting mode '" + text + "'");
}

CountDistribution::CountDistribution(std::vector<Pattern> patterns, std::size_t n, IidModel model,
                                     Counting counting, Masses pmf)
    : patterns_(std::move(patterns)), n_(n), model_(std::move(model)), counting_(counting) {
  if (patterns_.empty()) throw InvalidArgument("distribution needs at least one pattern");
  for (const auto& [k, p] : pmf) add_mass(k, p);
}

Rational CountDistribution::mass(const CountVector& k) const {
  auto it = pmf_.find(k);
  return it == pmf_.end() ? Rational(0) : it->second;
}

void CountDistribution::add_mass(const CountVector& k, const Rational& p) {
  if (k.size() != patterns_.size()) throw ArityMismatch("count vector length differs from pattern count");
  if (p.is_zero()) return;
  auto [it, inserted] = pmf_.try_emplace(k, p);
  if (!inserted) {
    it->second += p;
    if (it->second.is_zero()) pmf_.erase(it);
  }
}

Rational CountDistribution::total() const {
  Rational sum = 0;
  for (const auto& [k, p] : pmf_) sum += p;
  return sum;
}

std::uint32_t CountDistribution::max_count(std::size_t i) const {
  std::uint32_t best = 0;
  for (const auto& [k, p] : pmf_) best = std::max(best, k.at(i));
  return best;
}

std::string CountDistribution::patterns_text() const {
  std::string out;
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    if (i) out += ',';
    out += patterns_[i].str();
  }
  return out;
}

CountDistribution CountDistribution::marginal(std::size_t index) const {
  if (index >= patterns_.size()) throw InvalidArgument("marginal index out of range");
  CountDistribution out({patterns_[index]}, n_, model_, counting_);
  for (const auto& [k, p] : pmf_) out.add_mass({k[index]}, p);
  return out;
}

Rational a_coefficient(const PatternChain& chain, std::size_t n, const IidModel& model, const CountVector& k) {
  if (k.size() != chain.size()) throw ArityMismatch("count vector length differs from chain length");
  auto total = static_cast<std::int64_t>(n);
  std::vector<std::int64_t> parts;
  parts.reserve(k.size());
  Rational weight = 1;
  for (std::size_t i = 0; i < k.size(); ++i) {
    auto ki = static_cast<std::int64_t>(k[i]);
    total -= static_cast<std::int64_t>(chain[i].size() - 1) * ki;
    parts.push_back(ki);
    if (ki) weight *= pattern_probability(chain[i], model).pow(static_cast<unsigned long>(ki));
  }
  if (total < 0) return 0;
  BigInt count = multinomial(total, parts);
  if (count == 0) return 0;
  return Rational(count) * weight;
}

void for_each_support_vector(const std::vector<std::size_t>& lengths, std::size_t n,
                             const std::function<void(const CountVector&)>& visit) {
  CountVector k(lengths.size(), 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t budget) {
    if (i == lengths.size()) {
      visit(k);
      return;
    }
    for (std::size_t c = 0; c * lengths[i] <= budget; ++c) {
      k[i] = static_cast<std::uint32_t>(c);
      rec(i + 1, budget - c * lengths[i]);
    }
    k[i] = 0;
  };
  rec(0, n);
}

MultiPoly build_FA(const PatternChain& chain, std::size_t n, const IidModel& model) {
  MultiPoly fa(chain.size());
  for_each_support_vector(chain.lengths(), n,
                          [&](const CountVector& k) { fa.add_term(k, a_coefficient(chain, n, model, k)); });
  return fa;
}

CountDistribution exclusive_joint_distribution(const PatternChain& chain, std::size_t n, const IidModel& model,
                                               unsigned workers) {
  MultiPoly fb = sieve_substitute(build_FA(chain, n, model), workers);
  CountDistribution out(chain.patterns(), n, model, Counting::kExclusive);
  for (const auto& [k, p] : fb.terms()) {
    if (p.sign() < 0) throw Error("negative mass " + p.str() + " at " + format_exponents(k));
    out.add_mass(k, p);
  }
  return out;
}

CountDistribution exclusive_to_raw(const CountDistribution& exclusive) {
  CountDistribution out(exclusive.patterns(), exclusive.n(), exclusive.model(), Counting::kRaw);
  CountVector r(exclusive.dimension());
  for (const auto& [k, p] : exclusive.pmf()) {
    std::uint32_t suffix = 0;
    for (std::size_t j = k.size(); j-- > 0;) {
      suffix += k[j];
      r[j] = suffix;
    }
    out.add_mass(r, p);
  }
  return out;
}

CountDistribution raw_joint_distribution(const PatternChain& chain, std::size_t n, const IidModel& model,
                                         unsigned workers) {
  return exclusive_to_raw(exclusive_joint_distribution(chain, n, model, workers));
}

std::vector<Rational> sliding_count_pmf(std::size_t n, std::size_t wlen, const Rational& prob, unsigned workers) {
  if (wlen == 0) throw InvalidArgument("pattern length must be positive");
  if (prob.sign() < 0 || prob > Rational(1)) throw InvalidArgument("pattern probability outside [0,1]");
  const std::size_t K = n / wlen;
  const BigInt p = prob.numerator();
  const BigInt q = prob.denominator();
  // Work with integers scaled by q^K: a[j] = C(n - (m-1) j, j) p^j q^(K-j).
  std::vector<BigInt> a(K + 1);
  {
    std::vector<BigInt> qpow(K + 1);
    qpow[0] = 1;
    for (std::size_t j = 1; j <= K; ++j) qpow[j] = qpow[j - 1] * q;
    BigInt ppow = 1;
    for (std::size_t j = 0; j <= K; ++j) {
      auto slots = static_cast<std::int64_t>(n) - static_cast<std::int64_t>((wlen - 1) * j);
      a[j] = binomial(slots, static_cast<std::int64_t>(j)) * ppow * qpow[K - j];
      ppow *= p;
    }
  }
  BigInt scale;
  mpz_pow_ui(scale.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(K));

  std::vector<Rational> pmf(K + 1);
  parallel_for(K + 1, workers, [&](std::size_t k) {
    BigInt sum = 0;
    BigInt choose = 1;  // C(j, k)
    for (std::size_t j = k; j <= K; ++j) {
      if ((j - k) % 2 == 0)
        sum += choose * a[j];
      else
        sum -= choose * a[j];
      choose *= static_cast<unsigned long>(j + 1);
      mpz_divexact_ui(choose.get_mpz_t(), choose.get_mpz_t(), static_cast<unsigned long>(j + 1 - k));
    }
    pmf[k] = Rational(sum, scale);
  });
  return pmf;
}

namespace {

void require_nonoverlapping(const Pattern& w) {
  if (!is_self_nonoverlapping(w))
    throw InvalidPattern("pattern \"" + w.str() + "\" overlaps itself; exact formulas need a non-overlapping pattern");
}

}  // namespace

CountDistribution single_pattern_distribution(const Pattern& w, std::size_t n, const IidModel& model,
                                              unsigned workers) {
  require_nonoverlapping(w);
  auto pmf = sliding_count_pmf(n, w.size(), pattern_probability(w, model), workers);
  CountDistribution out({w}, n, model, Counting::kRaw);
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (pmf[k].sign() < 0) throw Error("negative mass at k=" + std::to_string(k));
    out.add_mass({static_cast<std::uint32_t>(k)}, pmf[k]);
  }
  return out;
}

Rational moment_for_probability(std::size_t n, std::size_t wlen, const Rational& prob, std::size_t t) {
  if (t < 1) throw InvalidArgument("moment order must be at least 1");
  if (wlen == 0) throw InvalidArgument("pattern length must be positive");
  const std::size_t T = n / wlen;
  Rational sum = 0;
  for (std::size_t s = 1; s <= std::min(T, t); ++s) {
    auto slots = static_cast<std::int64_t>(n - s * wlen + s);
    BigInt c = surjections(static_cast<std::int64_t>(t), static_cast<std::int64_t>(s)) *
               binomial(slots, static_cast<std::int64_t>(s));
    sum += Rational(c) * prob.pow(static_cast<unsigned long>(s));
  }
  return sum;
}

MomentReport moment(const Pattern& w, std::size_t n, const IidModel& model, std::size_t t) {
  require_nonoverlapping(w);
  return {n, w.str(), t, moment_for_probability(n, w.size(), pattern_probability(w, model), t), n / w.size()};
}

MeanVariance mean_variance_for_probability(std::size_t n, std::size_t wlen, const Rational& prob) {
  auto nn = static_cast<long>(n);
  auto m = static_cast<long>(wlen);
  MeanVariance mv;
  mv.mean = Rational(nn - m + 1) * prob;
  mv.variance = mv.mean + Rational((nn - 2 * m + 2) * (nn - 2 * m + 1)) * prob * prob - mv.mean * mv.mean;
  mv.outside_formula_domain = nn < 2 * m - 2;
  return mv;
}

MeanVariance mean_variance(const Pattern& w, std::size_t n, const IidModel& model) {
  require_nonoverlapping(w);
  return mean_variance_for_probability(n, w.size(), pattern_probability(w, model));
}

Rational cdf(const CountDistribution& d, std::int64_t k) {
  if (d.dimension() != 1) throw InvalidArgument("cdf needs a one-dimensional distribution");
  Rational sum = 0;
  if (k < 0) return sum;
  for (const auto& [kv, p] : d.pmf()) {
    if (static_cast<std::int64_t>(kv[0]) > k) break;  // graded-lex is numeric order in 1-D
    sum += p;
  }
  return sum;
}

std::string distribution_header(const std::vector<Pattern>& patterns, std::size_t n, const IidModel& model,
                                Counting counting) {
  std::ostringstream os;
  os << "# slideblock-dist v1\n";
  os << "# patterns=";
  for (std::size_t i = 0; i < patterns.size(); ++i) os << (i ? "," : "") << patterns[i].str();
  os << "\n# alphabet=" << model.alphabet().symbols() << "\n# model=" << model.str() << "\n# n=" << n
     << "\n# counting=" << to_string(counting) << '\n';
  return os.str();
}

void write_distribution(std::ostream& os, const CountDistribution& d) {
  os << distribution_header(d.patterns(), d.n(), d.model(), d.counting());
  for (const auto& [k, p] : d.pmf()) os << format_exponents(k) << ':' << p.str() << '\n';
}

CountDistribution read_distribution(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "# slideblock-dist v1")
    throw ParseError("missing or unsupported distribution header");
  std::map<std::string, std::string> fields;
  std::vector<std::pair<CountVector, Rational>> masses;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (line.size() < 3 || eq == std::string::npos) throw ParseError("bad header line: " + line);
      fields[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("bad mass line: " + line);
    masses.emplace_back(parse_exponents(line.substr(0, colon)), Rational::parse(line.substr(colon + 1)));
  }
  for (const char* key : {"patterns", "alphabet", "model", "n", "counting"})
    if (!fields.count(key)) throw ParseError(std::string("distribution header lacks '") + key + "'");
  Alphabet alphabet(fields["alphabet"]);
  std::vector<Rational> probs;
  {
    std::stringstream ss(fields["model"]);
    std::string piece;
    while (std::getline(ss, piece, ',')) probs.push_back(Rational::parse(piece));
  }
  CountDistribution d(parse_pattern_list(fields["patterns"]), std::stoul(fields["n"]),
                      IidModel(alphabet, std::move(probs)), parse_counting(fields["counting"]));
  for (const auto& [k, p] : masses) d.add_mass(k, p);
  return d;
}

void write_distribution_csv(std::ostream& os, const CountDistribution& d) {
  for (std::size_t i = 0; i < d.dimension(); ++i) os << 'k' << (i + 1) << ',';
  os << "probability,exact\n";
  for (const auto& [k, p] : d.pmf()) os << format_exponents(k) << ',' << p.to_decimal(17) << ',' << p.str() << '\n';
}

}  // namespace slideblock
