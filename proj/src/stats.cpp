#include "slideblock/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "slideblock/errors.hpp"

namespace slideblock {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

void check_theta(const Rational& theta, const Rational& theta_star) {
  if (!(theta.sign() > 0 && theta <= theta_star && theta_star < Rational(1)))
    throw InvalidArgument("need 0 < theta <= theta_star < 1, got theta=" + theta.str() +
                          " theta_star=" + theta_star.str());
}

double sqrt_of(const Rational& r) { return std::sqrt(r.to_double()); }

// Probabilities too large for the word length drive the variance formula to zero or below.
MeanVariance checked_mean_variance(std::size_t n, std::size_t wlen, const Rational& prob) {
  auto mv = mean_variance_for_probability(n, wlen, prob);
  if (mv.variance.sign() <= 0)
    throw InvalidArgument("variance formula is non-positive at P(w)=" + prob.str() + ", |w|=" + std::to_string(wlen) +
                          ", n=" + std::to_string(n) + "; no non-overlapping word has these parameters");
  return mv;
}

}  // namespace

PowerCurvePoint power_sliding(const Rational& theta, const Rational& theta_star, std::size_t wlen, std::size_t n,
                              double sigma_mult, PowerMethod method, unsigned workers) {
  check_theta(theta, theta_star);
  if (!(sigma_mult > 0)) throw InvalidArgument("sigma multiplier must be positive");
  auto null_mv = checked_mean_variance(n, wlen, theta_star);
  double threshold = null_mv.mean.to_double() - sigma_mult * sqrt_of(null_mv.variance);
  double power = 0;
  if (method == PowerMethod::kClt) {
    auto alt = checked_mean_variance(n, wlen, theta);
    power = normal_cdf((threshold - alt.mean.to_double()) / sqrt_of(alt.variance));
  } else {
    // N_w < c  <=>  N_w <= ceil(c) - 1
    auto last = static_cast<std::int64_t>(std::ceil(threshold)) - 1;
    if (last >= 0) {
      auto pmf = sliding_count_pmf(n, wlen, theta, workers);
      Rational mass = 0;
      for (std::int64_t k = 0; k <= last && k < static_cast<std::int64_t>(pmf.size()); ++k) mass += pmf[k];
      power = mass.to_double();
    }
  }
  return {theta.to_double(), std::clamp(power, 0.0, 1.0), method, Sampling::kSliding};
}

PowerCurvePoint power_blockwise(const Rational& theta, const Rational& theta_star, std::size_t wlen, std::size_t n,
                                double sigma_mult) {
  check_theta(theta, theta_star);
  if (!(sigma_mult > 0)) throw InvalidArgument("sigma multiplier must be positive");
  if (wlen == 0 || n < wlen) throw InvalidArgument("block-wise test needs at least one block");
  const double blocks = static_cast<double>(n / wlen);
  double ts = theta_star.to_double();
  double t = theta.to_double();
  double threshold = blocks * ts - sigma_mult * std::sqrt(blocks * ts * (1 - ts));
  double power = normal_cdf((threshold - blocks * t) / std::sqrt(blocks * t * (1 - t)));
  return {t, std::clamp(power, 0.0, 1.0), PowerMethod::kClt, Sampling::kBlockwise};
}

std::vector<PowerCurveRow> power_curve(const std::vector<Rational>& thetas, const Rational& theta_star,
                                       std::size_t wlen, std::size_t n, double sigma_mult, bool with_exact,
                                       unsigned workers) {
  std::vector<PowerCurveRow> rows;
  rows.reserve(thetas.size());
  for (const auto& th : thetas) {
    PowerCurveRow row{th, power_sliding(th, theta_star, wlen, n, sigma_mult, PowerMethod::kClt).power,
                      std::nullopt, power_blockwise(th, theta_star, wlen, n, sigma_mult).power};
    if (with_exact)
      row.sliding_exact = power_sliding(th, theta_star, wlen, n, sigma_mult, PowerMethod::kExact, workers).power;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_power_csv(std::ostream& os, const std::vector<PowerCurveRow>& rows) {
  os << "theta,power_sliding_clt,power_sliding_exact,power_blockwise\n";
  for (const auto& r : rows) {
    os << format_double(r.theta.to_double()) << ',' << format_double(r.sliding_clt) << ','
       << (r.sliding_exact ? format_double(*r.sliding_exact) : std::string()) << ',' << format_double(r.blockwise)
       << '\n';
  }
}

Rational ks_distance(const EmpiricalDistribution& empirical, const CountDistribution& exact) {
  if (exact.dimension() != 1) throw InvalidArgument("KS needs a one-dimensional exact distribution");
  if (empirical.trials == 0) throw InvalidArgument("empty empirical distribution");
  std::size_t last = std::max<std::size_t>(empirical.counts.empty() ? 0 : empirical.counts.size() - 1,
                                           exact.max_count(0));
  const BigInt trials(std::to_string(empirical.trials));
  Rational exact_cdf = 0;
  std::uint64_t seen = 0;
  Rational best = 0;
  for (std::size_t k = 0; k <= last; ++k) {
    exact_cdf += exact.mass({static_cast<std::uint32_t>(k)});
    seen += empirical.count(k);
    Rational diff = (Rational(BigInt(std::to_string(seen)), trials) - exact_cdf).abs();
    if (diff > best) best = diff;
  }
  return best;
}

double ks_statistic(const EmpiricalDistribution& empirical, const CountDistribution& exact) {
  return ks_distance(empirical, exact).to_double();
}

double kolmogorov_pvalue(double d, std::uint64_t t) {
  if (d < 0 || t == 0) throw InvalidArgument("kolmogorov_pvalue needs d >= 0 and t >= 1");
  const double x = std::sqrt(static_cast<double>(t)) * d;
  if (x <= 0) return 1.0;
  constexpr double kPi = 3.14159265358979323846;
  double p = 0;
  if (x < 0.2) {
    // Dual series: 1 - sqrt(2 pi)/x * sum exp(-(2k-1)^2 pi^2 / (8 x^2)).
    double sum = 0;
    for (int k = 1; k < 100; ++k) {
      double term = std::exp(-(2.0 * k - 1) * (2.0 * k - 1) * kPi * kPi / (8 * x * x));
      sum += term;
      if (term < 1e-16) break;
    }
    p = 1.0 - std::sqrt(2 * kPi) / x * sum;
  } else {
    for (int k = 1; k < 1000; ++k) {
      double term = std::exp(-2.0 * k * k * x * x);
      p += (k % 2 ? 2.0 : -2.0) * term;
      if (term < 1e-16) break;
    }
  }
  return std::clamp(p, 0.0, 1.0);
}

ChiSquareCells chi_square_cells(const EmpiricalDistribution& empirical, const CountDistribution& exact,
                                double min_expected) {
  if (exact.dimension() != 1) throw InvalidArgument("chi-square needs a one-dimensional exact distribution");
  if (empirical.trials == 0) throw InvalidArgument("empty empirical distribution");
  if (!(min_expected > 0)) throw InvalidArgument("min_expected must be positive");
  const double t = static_cast<double>(empirical.trials);
  std::size_t last = std::max<std::size_t>(empirical.counts.empty() ? 0 : empirical.counts.size() - 1,
                                           exact.max_count(0));
  ChiSquareCells cells;
  double obs = 0;
  double exp = 0;
  for (std::size_t k = 0; k <= last; ++k) {
    obs += static_cast<double>(empirical.count(k));
    exp += t * exact.mass({static_cast<std::uint32_t>(k)}).to_double();
    if (exp >= min_expected) {
      cells.observed.push_back(obs);
      cells.expected.push_back(exp);
      obs = exp = 0;
    }
  }
  if (exp > 0 || obs > 0) {
    if (cells.expected.empty()) {
      cells.observed.push_back(obs);
      cells.expected.push_back(exp);
    } else {
      cells.observed.back() += obs;
      cells.expected.back() += exp;
    }
  }
  return cells;
}

TestReport chi_square_gof(const EmpiricalDistribution& empirical, const CountDistribution& exact,
                          double min_expected) {
  auto cells = chi_square_cells(empirical, exact, min_expected);
  if (cells.expected.size() < 2) throw InvalidArgument("fewer than 2 cells after merging");
  double x2 = 0;
  for (std::size_t i = 0; i < cells.expected.size(); ++i) {
    double diff = cells.observed[i] - cells.expected[i];
    x2 += diff * diff / cells.expected[i];
  }
  TestReport r;
  r.method = TestMethod::kChiSquare;
  r.statistic = x2;
  r.degrees_of_freedom = cells.expected.size() - 1;
  r.p_value = x2 <= 0 ? 1.0 : boost::math::gamma_q(0.5 * static_cast<double>(*r.degrees_of_freedom), 0.5 * x2);
  r.trials = empirical.trials;
  r.pattern = empirical.pattern.str();
  r.n = empirical.n;
  r.ks_distance = ks_statistic(empirical, exact);
  return r;
}

TestReport run_ks_experiment(const GeneratorSpec& spec, const Pattern& w, std::size_t n, std::uint64_t trials,
                             const CountDistribution& exact, const ExperimentOptions& options) {
  if (!w.is_concrete()) throw InvalidPattern("KS experiment needs a concrete word");
  auto empirical = monte_carlo_distribution(spec, w, n, trials, options.streams, options.workers);
  TestReport r;
  r.method = TestMethod::kKolmogorovSmirnov;
  r.statistic = ks_statistic(empirical, exact);
  r.p_value = kolmogorov_pvalue(r.statistic, trials);
  r.trials = trials;
  r.generator = spec;
  r.pattern = w.str();
  r.n = n;
  r.exact_cache_id = options.exact_cache_id;
  r.discrete_approximation = true;
  return r;
}

TestReport run_ks_experiment(const GeneratorSpec& spec, const Pattern& w, std::size_t n, std::uint64_t trials,
                             const ExperimentOptions& options) {
  if (!w.is_concrete()) throw InvalidPattern("KS experiment needs a concrete word");
  auto exact = single_pattern_distribution(w, n, options.model, options.workers);
  return run_ks_experiment(spec, w, n, trials, exact, options);
}

std::string to_json(const TestReport& report, std::optional<std::string> timestamp) {
  nlohmann::ordered_json j;
  if (report.generator) {
    j["family"] = family_name(report.generator->family);
    j["seed"] = report.generator->seed;
    j["policy"] = report.generator->policy.str();
  } else {
    j["family"] = nullptr;
    j["seed"] = nullptr;
    j["policy"] = nullptr;
  }
  j["pattern"] = report.pattern;
  j["n"] = report.n;
  j["trials"] = report.trials;
  if (report.method == TestMethod::kKolmogorovSmirnov) {
    j["D"] = report.statistic;
  } else {
    j["D"] = report.ks_distance ? nlohmann::ordered_json(*report.ks_distance) : nlohmann::ordered_json(nullptr);
    j["chi_square"] = report.statistic;
    j["dof"] = report.degrees_of_freedom.value_or(0);
  }
  j["p_value"] = report.p_value;
  j["method"] = report.method == TestMethod::kKolmogorovSmirnov ? "ks" : "chisq";
  j["exact_cache_id"] = report.exact_cache_id;
  if (report.discrete_approximation) j["discrete_approximation"] = true;
  if (timestamp) j["timestamp"] = *timestamp;
  return j.dump(2);
}

}  // namespace slideblock
