#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slideblock/distribution.hpp"
#include "slideblock/oracle.hpp"
#include "slideblock/rngs.hpp"

namespace slideblock {

// Standard normal CDF via erfc.
double normal_cdf(double x);

enum class PowerMethod { kClt, kExact };
enum class Sampling { kSliding, kBlockwise };

struct PowerCurvePoint {
  double theta;
  double power;
  PowerMethod method;
  Sampling sampling;
};

// One-sided test of P(w) = theta_star against P(w) < theta_star that rejects
// when N_w < E - sigma_mult * sqrt(V) at theta_star. Returns the rejection
// probability when P(w) = theta. Requires 0 < theta <= theta_star < 1.
PowerCurvePoint power_sliding(const Rational& theta, const Rational& theta_star, std::size_t wlen, std::size_t n,
                              double sigma_mult, PowerMethod method, unsigned workers = 1);

// Same test on the block-wise count over floor(n/|w|) disjoint blocks (CLT).
PowerCurvePoint power_blockwise(const Rational& theta, const Rational& theta_star, std::size_t wlen, std::size_t n,
                                double sigma_mult);

struct PowerCurveRow {
  Rational theta;
  double sliding_clt;
  std::optional<double> sliding_exact;
  double blockwise;
};

std::vector<PowerCurveRow> power_curve(const std::vector<Rational>& thetas, const Rational& theta_star,
                                       std::size_t wlen, std::size_t n, double sigma_mult, bool with_exact,
                                       unsigned workers = 1);
// Columns: theta, power_sliding_clt, power_sliding_exact, power_blockwise.
void write_power_csv(std::ostream& os, const std::vector<PowerCurveRow>& rows);

// sup_k |F_t(k) - F(k)| with both CDFs evaluated exactly.
Rational ks_distance(const EmpiricalDistribution& empirical, const CountDistribution& exact);
double ks_statistic(const EmpiricalDistribution& empirical, const CountDistribution& exact);

// Asymptotic Kolmogorov tail K(sqrt(t) * d).
double kolmogorov_pvalue(double d, std::uint64_t t);

enum class TestMethod { kKolmogorovSmirnov, kChiSquare };

struct TestReport {
  TestMethod method = TestMethod::kKolmogorovSmirnov;
  double statistic = 0;  // D for KS, Pearson X^2 for chi-square
  double p_value = 1;
  std::uint64_t trials = 0;
  std::optional<GeneratorSpec> generator;
  std::string pattern;
  std::size_t n = 0;
  std::optional<std::size_t> degrees_of_freedom;
  std::string exact_cache_id;
  // Set for KS: the continuous Kolmogorov law is applied to a discrete F.
  bool discrete_approximation = false;
  std::optional<double> ks_distance;  // chi-square reports also carry D
};

std::string to_json(const TestReport& report, std::optional<std::string> timestamp = std::nullopt);

// Pearson goodness of fit over cells merged left to right until each
// expected count reaches min_expected; a short final remainder joins the
// last cell.
struct ChiSquareCells {
  std::vector<double> observed;
  std::vector<double> expected;
};
ChiSquareCells chi_square_cells(const EmpiricalDistribution& empirical, const CountDistribution& exact,
                                double min_expected);
TestReport chi_square_gof(const EmpiricalDistribution& empirical, const CountDistribution& exact,
                          double min_expected = 5.0);

struct ExperimentOptions {
  unsigned streams = 1;
  unsigned workers = 1;
  // Null model for the exact reference; fair coin by default.
  IidModel model = IidModel::fair();
  std::string exact_cache_id;
};

// Monte Carlo histogram -> KS distance to the exact law -> Kolmogorov p-value.
TestReport run_ks_experiment(const GeneratorSpec& spec, const Pattern& w, std::size_t n, std::uint64_t trials,
                             const ExperimentOptions& options = {});
// Variant that reuses a precomputed exact distribution.
TestReport run_ks_experiment(const GeneratorSpec& spec, const Pattern& w, std::size_t n, std::uint64_t trials,
                             const CountDistribution& exact, const ExperimentOptions& options);

}  // namespace slideblock
