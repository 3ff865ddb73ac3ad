#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "slideblock/cache.hpp"
#include "slideblock/distribution.hpp"
#include "slideblock/errors.hpp"
#include "slideblock/oracle.hpp"
#include "slideblock/rngs.hpp"
#include "slideblock/stats.hpp"

namespace slideblock::cli {

namespace {

// Writes to --out when given, else to the caller's stream.
class Output {
 public:
  Output(const RunConfig& cfg, std::ostream& fallback) : os_(&fallback) {
    if (cfg.out_path) {
      file_.open(*cfg.out_path);
      if (!file_) throw InvalidArgument("cannot open output file " + *cfg.out_path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::string format_or(const RunConfig& cfg, const std::string& fallback) {
  return cfg.format.empty() ? fallback : cfg.format;
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string decimal(const Rational& r) { return r.to_decimal(17); }

CountDistribution compute_distribution(const PatternChain& chain, std::size_t n, const IidModel& model,
                                       Counting counting, unsigned workers) {
  if (chain.size() == 1) {
    auto d = single_pattern_distribution(chain[0], n, model, workers);
    if (counting == Counting::kRaw) return d;
    return CountDistribution(chain.patterns(), n, model, Counting::kExclusive, d.pmf());
  }
  return counting == Counting::kExclusive ? exclusive_joint_distribution(chain, n, model, workers)
                                          : raw_joint_distribution(chain, n, model, workers);
}

CountDistribution cached_distribution(const RunConfig& cfg, const PatternChain& chain, std::size_t n,
                                      const IidModel& model, Counting counting, std::ostream& err) {
  auto compute = [&] { return compute_distribution(chain, n, model, counting, cfg.workers); };
  if (!cfg.use_cache) return compute();
  DistributionCache cache(DistributionCache::resolve_dir(cfg.cache_dir));
  bool hit = false;
  auto d = cache.get_or_compute(chain.patterns(), n, model, counting, compute, &hit);
  err << "cache " << (hit ? "hit" : "miss") << ": "
      << DistributionCache::cache_id(chain.patterns(), n, model, counting) << "\n";
  return d;
}

GeneratorSpec generator_of(const RunConfig& cfg) {
  if (cfg.generator.empty()) throw InvalidArgument("--gen is required");
  auto spec = GeneratorSpec::parse(cfg.generator);
  if (cfg.seed) spec.seed = *cfg.seed;
  return spec;
}

void require_sampling(const RunConfig& cfg) {
  if (cfg.n < 1) throw InvalidArgument("--n must be at least 1");
  if (cfg.trials < 1) throw InvalidArgument("--trials must be at least 1");
  if (cfg.streams < 1) throw InvalidArgument("--streams must be at least 1");
}

struct ExactReference {
  Pattern pattern;
  IidModel model;
  CountDistribution exact;
  std::string cache_id;
};

ExactReference exact_reference(const RunConfig& cfg, std::ostream& err) {
  Pattern w(cfg.patterns);
  auto model = parse_model(cfg.model, cfg.alphabet);
  auto chain = validate_chain({w}, model);
  auto exact = cached_distribution(cfg, chain, cfg.n, model, Counting::kRaw, err);
  return {w, model, std::move(exact), DistributionCache::cache_id({w}, cfg.n, model, Counting::kRaw)};
}

int finish_test(const RunConfig& cfg, const TestReport& report, std::ostream& out, std::ostream& err) {
  Output o(cfg, out);
  o.stream() << to_json(report, cfg.timestamp ? std::optional<std::string>(utc_timestamp()) : std::nullopt) << "\n";
  bool reject = report.p_value < cfg.alpha;
  err << (report.method == TestMethod::kChiSquare ? "chi-square=" : "D=") << report.statistic
      << " p-value=" << report.p_value << " alpha=" << cfg.alpha << " -> " << (reject ? "reject" : "pass") << "\n";
  return reject ? kExitReject : kExitPass;
}

std::vector<Rational> power_grid(const RunConfig& cfg) {
  std::vector<Rational> grid;
  if (cfg.grid.empty()) {
    for (long k = 10; k <= 25; ++k) grid.emplace_back(k, 100);
    return grid;
  }
  std::stringstream ss(cfg.grid);
  std::string item;
  while (std::getline(ss, item, ',')) grid.push_back(Rational::parse(item));
  if (grid.empty()) throw InvalidArgument("empty --grid");
  return grid;
}

// N_{1^k}(x) = sum_{j>=k} N_{01^j}(0x) for runs of ones, k = 2..n.
bool leading_zero_run_identity(std::size_t n, const IidModel& model) {
  std::vector<Pattern> ones, zero_ones;
  for (std::size_t j = 2; j <= n; ++j) {
    ones.emplace_back(std::string(j, '1'));
    zero_ones.emplace_back("0" + std::string(j, '1'));
  }
  auto left = brute_force_joint(ones, n, model, Counting::kRaw);
  auto right = conditioned_brute_force("0", zero_ones, n + 1, model, Counting::kRaw);
  CountDistribution cumulative(ones, n, model, Counting::kRaw);
  for (const auto& [k, p] : right.pmf()) {
    CountVector c(k.size());
    std::uint32_t acc = 0;
    for (std::size_t j = k.size(); j-- > 0;) c[j] = (acc += k[j]);
    cumulative.add_mass(c, p);
  }
  return left == cumulative;
}

}  // namespace

IidModel parse_model(const std::string& text, const std::string& alphabet_text) {
  Alphabet alphabet(alphabet_text);
  if (text == "fair") return IidModel::fair(alphabet);
  if (text.rfind("p=", 0) != 0) throw ParseError("model must be 'fair' or 'p=<rational>[,...]', got '" + text + "'");
  std::vector<Rational> probs;
  std::stringstream ss(text.substr(2));
  std::string item;
  while (std::getline(ss, item, ',')) probs.push_back(Rational::parse(item));
  if (probs.size() == 1 && alphabet.size() == 2) return IidModel(alphabet, {Rational(1) - probs[0], probs[0]});
  if (probs.size() != alphabet.size())
    throw ParseError("model lists " + std::to_string(probs.size()) + " probabilities for " +
                     std::to_string(alphabet.size()) + " symbols");
  return IidModel(alphabet, probs);
}

int cmd_dist(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto model = parse_model(cfg.model, cfg.alphabet);
  auto chain = validate_chain(parse_pattern_list(cfg.patterns), model);
  std::vector<Counting> modes;
  if (cfg.counting == "both") {
    modes = {Counting::kExclusive, Counting::kRaw};
  } else {
    modes = {parse_counting(cfg.counting)};
  }
  const std::string format = format_or(cfg, "csv");
  if (format != "csv" && format != "text") throw InvalidArgument("dist --format must be csv or text");

  Output o(cfg, out);
  bool normalized = true;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    auto d = cached_distribution(cfg, chain, cfg.n, model, modes[i], err);
    if (modes.size() > 1) o.stream() << (i ? "\n" : "") << "# counting=" << to_string(modes[i]) << "\n";
    if (format == "csv") {
      write_distribution_csv(o.stream(), d);
    } else {
      write_distribution(o.stream(), d);
    }
    Rational total = d.total();
    bool ok = total == Rational(1);
    bool nonnegative = std::all_of(d.pmf().begin(), d.pmf().end(), [](const auto& e) { return e.second.sign() >= 0; });
    normalized &= ok && nonnegative;
    err << "normalization (" << to_string(modes[i]) << "): sum = " << total.str() << (ok ? " OK" : " FAILED")
        << ", " << d.pmf().size() << " nonzero masses" << (nonnegative ? "" : ", NEGATIVE MASS") << "\n";
  }
  return normalized ? kExitPass : kExitReject;
}

int cmd_moments(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Pattern w(cfg.patterns);
  auto model = parse_model(cfg.model, cfg.alphabet);
  w.check_alphabet(model.alphabet());
  if (cfg.tmax < 1) throw InvalidArgument("--tmax must be at least 1");
  const std::string format = format_or(cfg, "text");
  std::vector<MomentReport> moments;
  for (std::size_t t = 1; t <= cfg.tmax; ++t) moments.push_back(moment(w, cfg.n, model, t));
  auto mv = mean_variance(w, cfg.n, model);

  Output o(cfg, out);
  if (format == "text") {
    for (const auto& m : moments)
      o.stream() << "t=" << m.order << ": " << m.value.str() << " (" << decimal(m.value) << ")\n";
    o.stream() << "mean: " << mv.mean.str() << " (" << decimal(mv.mean) << ")\n";
    o.stream() << "variance: " << mv.variance.str() << " (" << decimal(mv.variance) << ")\n";
  } else if (format == "csv") {
    o.stream() << "t,moment,exact\n";
    for (const auto& m : moments) o.stream() << m.order << "," << decimal(m.value) << "," << m.value.str() << "\n";
  } else if (format == "json") {
    nlohmann::ordered_json j;
    j["pattern"] = w.str();
    j["n"] = cfg.n;
    j["model"] = model.str();
    j["truncation"] = moments.front().truncation;
    auto& list = j["moments"] = nlohmann::ordered_json::array();
    for (const auto& m : moments) list.push_back({{"t", m.order}, {"exact", m.value.str()}, {"value", m.value.to_double()}});
    j["mean"] = mv.mean.str();
    j["variance"] = mv.variance.str();
    j["outside_formula_domain"] = mv.outside_formula_domain;
    o.stream() << j.dump() << "\n";
  } else {
    throw InvalidArgument("moments --format must be text, csv or json");
  }
  if (mv.outside_formula_domain)
    err << "note: n < 2|w| - 2, the mean/variance closed form is outside its derivation range\n";
  return kExitPass;
}

int cmd_power(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (format_or(cfg, "csv") != "csv") throw InvalidArgument("power --format must be csv");
  auto theta_star = Rational::parse(cfg.theta_star);
  const std::size_t n = cfg.n ? cfg.n : 500;
  auto rows = power_curve(power_grid(cfg), theta_star, cfg.wlen, n, cfg.sigma, cfg.exact_power, cfg.workers);
  Output o(cfg, out);
  write_power_csv(o.stream(), rows);
  return kExitPass;
}

int cmd_kstest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_sampling(cfg);
  auto spec = generator_of(cfg);
  auto ref = exact_reference(cfg, err);
  ExperimentOptions options{cfg.streams, cfg.workers, ref.model, ref.cache_id};
  auto report = run_ks_experiment(spec, ref.pattern, cfg.n, cfg.trials, ref.exact, options);
  return finish_test(cfg, report, out, err);
}

int cmd_chisq(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_sampling(cfg);
  auto spec = generator_of(cfg);
  auto ref = exact_reference(cfg, err);
  auto empirical = monte_carlo_distribution(spec, ref.pattern, cfg.n, cfg.trials, cfg.streams, cfg.workers);
  auto report = chi_square_gof(empirical, ref.exact, cfg.min_expected);
  report.generator = spec;
  report.pattern = ref.pattern.str();
  report.n = cfg.n;
  report.exact_cache_id = ref.cache_id;
  report.ks_distance = ks_statistic(empirical, ref.exact);
  return finish_test(cfg, report, out, err);
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  require_sampling(cfg);
  auto spec = generator_of(cfg);
  Pattern w(cfg.patterns);
  auto empirical = monte_carlo_distribution(spec, w, cfg.n, cfg.trials, cfg.streams, cfg.workers);
  const std::string format = format_or(cfg, "csv");
  Output o(cfg, out);
  if (format == "csv") {
    write_empirical_csv(o.stream(), empirical);
  } else if (format == "text") {
    write_oracle_result(o.stream(), {OracleResult::Method::kMonteCarlo, std::nullopt, empirical, empirical.trials});
  } else {
    throw InvalidArgument("simulate --format must be csv or text");
  }
  return kExitPass;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const std::size_t max_n = cfg.n ? cfg.n : 14;
  if (max_n >= 64 || (std::uint64_t{1} << max_n) > kEnumerationCap)
    throw CapExceeded("oracle --n " + std::to_string(max_n) + " needs 2^" + std::to_string(max_n) +
                      " samples, above the enumeration cap 2^24");
  const std::pair<std::string, IidModel> models[] = {{"fair", IidModel::fair()},
                                                     {"p=1/3", IidModel::bernoulli(Rational(1, 3))}};
  auto chains = enumerate_valid_chains(cfg.max_members, cfg.max_length, IidModel::fair());

  std::size_t cases = 0, failed = 0;
  auto report = [&](bool ok, const std::string& label) {
    ++cases;
    failed += !ok;
    out << (ok ? "PASS " : "FAIL ") << label << "\n";
  };
  const std::string range = " n=1.." + std::to_string(max_n);
  for (const auto& chain : chains) {
    for (const auto& [name, model] : models) {
      bool exclusive_ok = true, raw_ok = true, single_ok = true;
      for (std::size_t n = 1; n <= max_n; ++n) {
        auto brute_raw = brute_force_joint(chain.patterns(), n, model, Counting::kRaw);
        exclusive_ok &= exclusive_joint_distribution(chain, n, model, cfg.workers) ==
                        brute_force_joint(chain.patterns(), n, model, Counting::kExclusive);
        raw_ok &= raw_joint_distribution(chain, n, model, cfg.workers) == brute_raw;
        if (chain.size() == 1) single_ok &= single_pattern_distribution(chain[0], n, model, cfg.workers) == brute_raw;
      }
      const std::string label = " chain=" + chain.str() + " model=" + name + range;
      report(exclusive_ok, "exclusive" + label);
      report(raw_ok, "raw" + label);
      if (chain.size() == 1) report(single_ok, "single-pattern" + label);
    }
  }
  for (const auto& [name, model] : models) {
    bool ok = true;
    for (std::size_t n = 2; n <= std::min<std::size_t>(max_n, 12); ++n) ok &= leading_zero_run_identity(n, model);
    report(ok, "leading-zero run identity 1^k vs 0 1^j model=" + name + " n=2.." +
                   std::to_string(std::min<std::size_t>(max_n, 12)));
  }
  out << cases << " cases, " << failed << " failed\n";
  return failed ? kExitReject : kExitPass;
}

int cmd_cache(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  DistributionCache cache(DistributionCache::resolve_dir(cfg.cache_dir));
  if (cfg.cache_action == "clear") {
    out << "removed " << cache.clear() << " entries from " << cache.dir().string() << "\n";
    return kExitPass;
  }
  auto entries = cache.list();
  std::size_t bad = 0;
  for (const auto& e : entries) {
    bad += !e.valid;
    if (cfg.cache_action == "list") {
      out << e.id << "  " << (e.valid ? "valid" : "INVALID") << "  " << e.summary << "\n";
    } else {
      out << (e.valid ? "OK " : "CORRUPT ") << e.id << "  " << e.summary << "\n";
    }
  }
  if (cfg.cache_action == "verify") {
    out << entries.size() << " entries, " << bad << " corrupt\n";
    return bad ? kExitReject : kExitPass;
  }
  return kExitPass;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string cache_dir;
  std::uint32_t seed = 0;
  bool no_cache = false;
  bool no_exact = false;

  CLI::App app{"Exact sliding-block pattern count distributions and generator tests", "slideblock"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--workers", cfg.workers, "Worker threads (output is identical for any value)")
      ->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", cache_dir, "Distribution cache directory (default $SLIDEBLOCK_CACHE_DIR or .slideblock-cache)");
  app.add_flag("--no-cache", no_cache, "Neither read nor write the distribution cache");

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "fair | p=<P('1')> | p=<p0>,<p1>,...")->capture_default_str();
    sub->add_option("--alphabet", cfg.alphabet, "Alphabet symbols")->capture_default_str();
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out_path, "Write output to this file"); };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--gen", cfg.generator, "Generator spec, e.g. bsd:seed=1:policy=lsb")->required();
    sub->add_option("--pattern", cfg.patterns, "Pattern")->required();
    sub->add_option("--n", cfg.n, "Sample length")->required();
    sub->add_option("--trials", cfg.trials, "Number of samples")->required();
    sub->add_option("--seed", seed, "Override the generator seed");
    sub->add_option("--streams", cfg.streams, "Independent generator streams (derived seeds)")->capture_default_str();
  };

  auto* dist = app.add_subcommand("dist", "Exact joint distribution of a pattern chain");
  dist->add_option("--chain", cfg.patterns, "Comma-separated chain, e.g. 1,10")->required();
  dist->add_option("--n", cfg.n, "Sample length")->required();
  dist->add_option("--counting", cfg.counting, "exclusive | raw | both")
      ->check(CLI::IsMember({"exclusive", "raw", "both"}))
      ->capture_default_str();
  dist->add_option("--format", cfg.format, "csv | text");
  add_model(dist);
  add_out(dist);

  auto* moments = app.add_subcommand("moments", "Exact moments E(N^t)");
  moments->add_option("--pattern", cfg.patterns, "Self-non-overlapping pattern")->required();
  moments->add_option("--n", cfg.n, "Sample length")->required();
  moments->add_option("--tmax", cfg.tmax, "Highest moment order")->capture_default_str();
  moments->add_option("--format", cfg.format, "text | csv | json");
  add_model(moments);
  add_out(moments);

  auto* power = app.add_subcommand("power", "Power curves of the sliding and block-wise tests");
  power->add_option("--theta-star", cfg.theta_star, "Null probability")->capture_default_str();
  power->add_option("--wlen", cfg.wlen, "Pattern length")->capture_default_str();
  power->add_option("--n", cfg.n, "Sample length (default 500)");
  power->add_option("--sigma", cfg.sigma, "Threshold in standard deviations")->capture_default_str();
  power->add_option("--grid", cfg.grid, "Comma-separated theta values (default 0.10..0.25 step 0.01)");
  power->add_flag("--no-exact", no_exact, "Skip the exact sliding power column");
  power->add_option("--format", cfg.format, "csv");
  add_out(power);

  auto* kstest = app.add_subcommand("kstest", "Kolmogorov-Smirnov test of a generator");
  add_sampling(kstest);
  kstest->add_option("--alpha", cfg.alpha, "Rejection level")->capture_default_str();
  kstest->add_flag("--timestamp", cfg.timestamp, "Add a timestamp field to the report");
  add_model(kstest);
  add_out(kstest);

  auto* chisq = app.add_subcommand("chisq", "Chi-square goodness-of-fit test of a generator");
  add_sampling(chisq);
  chisq->add_option("--alpha", cfg.alpha, "Rejection level")->capture_default_str();
  chisq->add_option("--min-expected", cfg.min_expected, "Minimum expected count per cell")->capture_default_str();
  chisq->add_flag("--timestamp", cfg.timestamp, "Add a timestamp field to the report");
  add_model(chisq);
  add_out(chisq);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo histogram of pattern counts");
  add_sampling(simulate);
  simulate->add_option("--format", cfg.format, "csv | text");
  add_out(simulate);

  auto* oracle = app.add_subcommand("oracle", "Check the engine against exhaustive enumeration");
  oracle->add_option("--n", cfg.n, "Largest sample length (default 14)");
  oracle->add_option("--max-members", cfg.max_members, "Longest chain")->capture_default_str();
  oracle->add_option("--max-length", cfg.max_length, "Longest member")->capture_default_str();

  auto* cache = app.add_subcommand("cache", "Inspect or clear the distribution cache");
  cache->add_option("action", cfg.cache_action, "list | verify | clear")
      ->required()
      ->check(CLI::IsMember({"list", "verify", "clear"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
  cfg.use_cache = !no_cache;
  cfg.exact_power = !no_exact;
  for (auto* sub : {kstest, chisq, simulate})
    if (sub->parsed() && sub->count("--seed")) cfg.seed = seed;

  try {
    for (auto* sub : app.get_subcommands()) {
      cfg.subcommand = sub->get_name();
      if (sub == dist) return cmd_dist(cfg, out, err);
      if (sub == moments) return cmd_moments(cfg, out, err);
      if (sub == power) return cmd_power(cfg, out, err);
      if (sub == kstest) return cmd_kstest(cfg, out, err);
      if (sub == chisq) return cmd_chisq(cfg, out, err);
      if (sub == simulate) return cmd_simulate(cfg, out, err);
      if (sub == oracle) return cmd_oracle(cfg, out, err);
      if (sub == cache) return cmd_cache(cfg, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace slideblock::cli
