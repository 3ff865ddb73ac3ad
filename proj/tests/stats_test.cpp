#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "slideblock/errors.hpp"
#include "slideblock/stats.hpp"

using namespace slideblock;

namespace {

const IidModel kFair = IidModel::fair();

CountDistribution univariate(std::initializer_list<Rational> pmf) {
  CountDistribution::Masses m;
  std::uint32_t k = 0;
  for (const auto& p : pmf) m.emplace(CountVector{k++}, p);
  return CountDistribution({Pattern("10")}, 3, kFair, Counting::kRaw, std::move(m));
}

EmpiricalDistribution empirical(std::vector<std::uint64_t> counts) {
  EmpiricalDistribution e{Pattern("10"), 3, 0, std::move(counts), "test"};
  for (auto c : e.counts) e.trials += c;
  return e;
}

const Rational kThetaStar(1, 4);

}  // namespace

TEST(NormalCdf, Examples) {
  EXPECT_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(-5.0), 2.8665e-7, 1e-11);
  EXPECT_NEAR(normal_cdf(1.0803), 0.86000, 1e-4);
  EXPECT_NEAR(normal_cdf(-40.0), 0.0, 1e-300);
  for (double x = -6; x <= 6; x += 0.25) EXPECT_NEAR(normal_cdf(x) + normal_cdf(-x), 1.0, 1e-15);
}

TEST(Power, SlidingTable) {
  const std::pair<Rational, double> rows[] = {
      {Rational(20, 100), 0.316007}, {Rational(18, 100), 0.860057}, {Rational(16, 100), 0.995681}};
  for (const auto& [theta, expected] : rows) {
    auto p = power_sliding(theta, kThetaStar, 2, 500, 5, PowerMethod::kClt);
    EXPECT_NEAR(p.power, expected, 1e-5) << theta.str();
    EXPECT_EQ(p.sampling, Sampling::kSliding);
  }
}

TEST(Power, BlockwiseTable) {
  const std::pair<Rational, double> rows[] = {
      {Rational(20, 100), 0.000295}, {Rational(18, 100), 0.002939}, {Rational(16, 100), 0.021481}};
  for (const auto& [theta, expected] : rows)
    EXPECT_NEAR(power_blockwise(theta, kThetaStar, 2, 500, 5).power, expected, 1e-5) << theta.str();
}

TEST(Power, AtNullEqualsNormalTail) {
  EXPECT_NEAR(power_sliding(kThetaStar, kThetaStar, 2, 500, 5, PowerMethod::kClt).power, normal_cdf(-5), 1e-18);
  EXPECT_NEAR(power_blockwise(kThetaStar, kThetaStar, 2, 500, 5).power, normal_cdf(-5), 1e-18);
  EXPECT_NEAR(power_sliding(Rational(1, 8), Rational(1, 8), 3, 300, 2, PowerMethod::kClt).power, normal_cdf(-2), 1e-15);
  EXPECT_THROW(power_sliding(kThetaStar, kThetaStar, 3, 300, 2, PowerMethod::kClt), InvalidArgument);
}

TEST(Power, ExactAgreesWithCltAndSlidingBeatsBlockwise) {
  for (long pct : {20, 18, 16}) {
    Rational theta(pct, 100);
    double clt = power_sliding(theta, kThetaStar, 2, 500, 5, PowerMethod::kClt).power;
    double exact = power_sliding(theta, kThetaStar, 2, 500, 5, PowerMethod::kExact).power;
    EXPECT_LT(std::abs(clt - exact), 0.02) << pct;
    EXPECT_GE(exact, 0.0);
    EXPECT_LE(exact, 1.0);
    EXPECT_GT(clt, power_blockwise(theta, kThetaStar, 2, 500, 5).power);
  }
}

TEST(Power, ExactSumsMassStrictlyBelowThreshold) {
  // c = 124.75 - 5 * sqrt(31.3125) ~ 96.77, so the rejection region is k <= 96.
  auto d = sliding_count_pmf(500, 2, Rational(1, 5));
  Rational below = 0;
  for (std::size_t k = 0; k <= 96 && k < d.size(); ++k) below += d[k];
  auto point = power_sliding(Rational(1, 5), kThetaStar, 2, 500, 5, PowerMethod::kExact);
  EXPECT_DOUBLE_EQ(point.power, below.to_double());
}

TEST(Power, RejectsBadRanges) {
  EXPECT_THROW(power_sliding(Rational(0), kThetaStar, 2, 500, 5, PowerMethod::kClt), InvalidArgument);
  EXPECT_THROW(power_sliding(Rational(3, 10), kThetaStar, 2, 500, 5, PowerMethod::kClt), InvalidArgument);
  EXPECT_THROW(power_blockwise(Rational(1, 5), Rational(1), 2, 500, 5), InvalidArgument);
  EXPECT_THROW(power_blockwise(Rational(1, 5), kThetaStar, 2, 500, 0), InvalidArgument);
}

TEST(Power, CurveCsv) {
  std::vector<Rational> grid = {Rational(1, 5), Rational(9, 50), Rational(4, 25), kThetaStar};
  auto rows = power_curve(grid, kThetaStar, 2, 500, 5, true);
  ASSERT_EQ(rows.size(), grid.size());
  std::ostringstream os;
  write_power_csv(os, rows);
  std::string text = os.str();
  EXPECT_EQ(text.rfind("theta,power_sliding_clt,power_sliding_exact,power_blockwise\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  auto no_exact = power_curve(grid, kThetaStar, 2, 500, 5, false);
  EXPECT_FALSE(no_exact[0].sliding_exact.has_value());
}

TEST(KsStatistic, Examples) {
  EXPECT_EQ(ks_distance(empirical({1}), univariate({Rational(1, 2), Rational(1, 2)})), Rational(1, 2));
  // "10" at n = 3 has law {0: 1/2, 1: 1/2}; one trial saw k = 1.
  auto exact = single_pattern_distribution(Pattern("10"), 3, kFair);
  EXPECT_EQ(ks_distance(empirical({0, 1}), exact), Rational(1, 2));
  EXPECT_EQ(ks_distance(empirical({4, 2, 2}), univariate({Rational(1, 2), Rational(1, 4), Rational(1, 4)})),
            Rational(0));
  EXPECT_THROW(ks_distance(empirical({}), exact), InvalidArgument);
}

TEST(KsStatistic, BoundedAndZeroOnlyOnAgreement) {
  auto exact = univariate({Rational(1, 8), Rational(3, 8), Rational(3, 8), Rational(1, 8)});
  for (std::uint64_t a = 0; a <= 4; ++a)
    for (std::uint64_t b = 0; b <= 4; ++b)
      for (std::uint64_t c = 0; c <= 4; ++c) {
        auto e = empirical({a, b, c, 1});
        Rational d = ks_distance(e, exact);
        ASSERT_GE(d, Rational(0));
        ASSERT_LE(d, Rational(1));
        bool agree = true;
        for (std::int64_t k = 0; k <= 4; ++k) agree &= e.cdf(k) == cdf(exact, k);
        ASSERT_EQ(d.is_zero(), agree);
      }
}

TEST(KolmogorovPvalue, Examples) {
  EXPECT_NEAR(kolmogorov_pvalue(0.001376, 200000), 0.843306, 1e-3);
  EXPECT_NEAR(kolmogorov_pvalue(0.001409, 200000), 0.822066, 1e-3);
  EXPECT_EQ(kolmogorov_pvalue(0.302073, 200000), 0.0);
  EXPECT_EQ(kolmogorov_pvalue(0.0, 10), 1.0);
}

TEST(KolmogorovPvalue, NonIncreasingAndContinuousAcrossBranch) {
  double prev = 1.0;
  for (int i = 0; i <= 4000; ++i) {
    double p = kolmogorov_pvalue(i * 1e-5, 200000);
    ASSERT_LE(p, prev + 1e-15) << i;
    ASSERT_GE(p, 0.0);
    prev = p;
  }
  // Both series at the branch point x = 0.2 (d = 0.2 / sqrt(t)).
  double below = kolmogorov_pvalue(std::nextafter(0.2, 0.0) / std::sqrt(200000.0), 200000);
  double above = kolmogorov_pvalue(0.2 / std::sqrt(200000.0), 200000);
  EXPECT_NEAR(below, above, 1e-12);
  EXPECT_NEAR(kolmogorov_pvalue(1.0 / std::sqrt(100.0), 100), 0.26999967167735456, 1e-12);
}

TEST(ChiSquare, MergingExample) {
  auto exact = univariate({Rational(1, 2), Rational(3, 10), Rational(3, 20), Rational(1, 20)});
  auto cells = chi_square_cells(empirical({20, 12, 6, 2}), exact, 5.0);
  EXPECT_EQ(cells.expected, (std::vector<double>{20, 12, 8}));
  EXPECT_EQ(cells.observed, (std::vector<double>{20, 12, 8}));
  auto report = chi_square_gof(empirical({20, 12, 6, 2}), exact);
  EXPECT_EQ(report.statistic, 0.0);
  EXPECT_EQ(report.p_value, 1.0);
  EXPECT_EQ(report.degrees_of_freedom, 2u);
  EXPECT_EQ(report.method, TestMethod::kChiSquare);
}

TEST(ChiSquare, StatisticAndErrors) {
  auto exact = univariate({Rational(1, 2), Rational(1, 2)});
  auto report = chi_square_gof(empirical({30, 10}), exact);
  EXPECT_DOUBLE_EQ(report.statistic, 10.0);
  EXPECT_NEAR(report.p_value, 0.0015654022580025, 1e-12);
  EXPECT_THROW(chi_square_gof(empirical({3, 3}), exact), InvalidArgument);
  EXPECT_THROW(chi_square_gof(empirical({30, 10}), exact, 0.0), InvalidArgument);
}

TEST(ChiSquare, BaselineGeneratorFits) {
  auto exact = single_pattern_distribution(Pattern("10"), 200, kFair);
  auto e = monte_carlo_distribution(GeneratorSpec::parse("baseline:seed=42"), Pattern("10"), 200, 10000);
  EXPECT_GT(chi_square_gof(e, exact).p_value, 0.001);
}

TEST(KsExperiment, BaselineControlPasses) {
  auto report = run_ks_experiment(GeneratorSpec::parse("baseline:seed=42"), Pattern("11110"), 1600, 20000);
  EXPECT_GT(report.p_value, 0.001);
  EXPECT_TRUE(report.discrete_approximation);
  EXPECT_EQ(report.trials, 20000u);
  auto again = run_ks_experiment(GeneratorSpec::parse("baseline:seed=42"), Pattern("11110"), 1600, 20000);
  EXPECT_EQ(report.statistic, again.statistic);
  EXPECT_THROW(run_ks_experiment(GeneratorSpec::parse("mt"), Pattern("11"), 100, 10), InvalidPattern);
}

TEST(TestReport, JsonShape) {
  TestReport r;
  r.statistic = 0.25;
  r.p_value = 0.5;
  r.trials = 100;
  r.generator = GeneratorSpec::parse("bsd:seed=1");
  r.pattern = "10";
  r.n = 1600;
  r.exact_cache_id = "abc";
  r.discrete_approximation = true;
  auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["family"], "bsd");
  EXPECT_EQ(j["seed"], 1);
  EXPECT_EQ(j["policy"], "lsb");
  EXPECT_EQ(j["pattern"], "10");
  EXPECT_EQ(j["n"], 1600);
  EXPECT_EQ(j["trials"], 100);
  EXPECT_EQ(j["D"], 0.25);
  EXPECT_EQ(j["p_value"], 0.5);
  EXPECT_EQ(j["method"], "ks");
  EXPECT_EQ(j["exact_cache_id"], "abc");
  EXPECT_FALSE(j.contains("timestamp"));
  EXPECT_EQ(nlohmann::json::parse(to_json(r, "2026-01-01T00:00:00Z"))["timestamp"], "2026-01-01T00:00:00Z");
}
