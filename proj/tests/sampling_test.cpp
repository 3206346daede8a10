#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "orderstat/asymptotics.hpp"
#include "orderstat/sampling.hpp"
#include "orderstat/test_hooks.hpp"

using namespace orderstat;

namespace {

FourierCoefficients constant_field(double v) {
  ComplexVector a(1);
  a << v;
  return FourierCoefficients(a, true);
}

}  // namespace

TEST(Deploy, RejectsEmptyDeployment) {
  Engine rng(1);
  EXPECT_THROW(deploy(0, rng), std::invalid_argument);
  EXPECT_THROW(DeploymentDraw({}), std::invalid_argument);
  EXPECT_THROW(DeploymentDraw({0.5, 1.5}), std::invalid_argument);
}

TEST(Deploy, SingleSensorInUnitInterval) {
  Engine rng(2);
  const auto d = deploy(1, rng);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_GE(d.locations()[0], 0.0);
  EXPECT_LE(d.locations()[0], 1.0);
}

TEST(Deploy, SeededReplayIsIdentical) {
  EXPECT_EQ(deploy_seeded(1000, 7).locations(), deploy_seeded(1000, 7).locations());
  EXPECT_NE(deploy_seeded(1000, 7).locations(), deploy_seeded(1000, 8).locations());
  EXPECT_EQ(deploy_seeded(10, 7).seed(), 7u);
}

TEST(Deploy, UniformMoments) {
  const auto d = deploy_seeded(100000, 3);
  double sum = 0.0, sq = 0.0;
  for (double u : d.locations()) {
    ASSERT_GE(u, 0.0);
    ASSERT_LE(u, 1.0);
    sum += u;
  }
  const double mean = sum / 1e5;
  for (double u : d.locations()) sq += (u - mean) * (u - mean);
  EXPECT_NEAR(mean, 0.5, 0.005);
  EXPECT_NEAR(sq / (1e5 - 1), 1.0 / 12.0, 0.002);
}

TEST(Observe, ConstantFieldGivesConstantValues) {
  const auto s = observe(constant_field(0.3), deploy_seeded(50, 4));
  ASSERT_EQ(s.size(), 50u);
  for (const auto& v : s.values()) EXPECT_EQ(v, Complex(0.3));
}

TEST(Observe, InjectedLocationsAreOrdered) {
  ComplexVector a(3);
  a << Complex(0.0, 0.2), 0.1, Complex(0.0, -0.2);  // 0.1 + 0.4 sin(2 pi t)
  const FourierCoefficients f(a, true);
  const auto s = observe(f, DeploymentDraw({0.9, 0.1, 0.5}));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], eval_field(f, 0.1));
  EXPECT_EQ(s[1], eval_field(f, 0.5));
  EXPECT_EQ(s[2], eval_field(f, 0.9));
}

TEST(Observe, MonotoneFieldYieldsSortedValues) {
  // -cos(2 pi t) is increasing on [0, 1/2]; locations are drawn there.
  ComplexVector a(3);
  a << -0.5, 0.0, -0.5;
  const FourierCoefficients f(a, true);
  for (int i = 1; i < 512; ++i) {
    ASSERT_GT(eval_field(f, 0.5 * i / 512.0).real(), eval_field(f, 0.5 * (i - 1) / 512.0).real());
  }
  Engine rng(5);
  std::vector<double> u(400);
  for (auto& x : u) x = 0.5 * uniform01(rng);
  const auto s = observe(f, DeploymentDraw(u));
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GE(s[i].real(), s[i - 1].real());
}

TEST(Observe, BoundedFieldValuesStayBounded) {
  Engine rng(6);
  for (int b = 0; b <= 5; ++b) {
    const auto f = random_field(b, rng, true);
    const auto s = observe(f, deploy(2000, rng));
    for (const auto& v : s.values()) ASSERT_LE(std::abs(v), 1.0 + 1e-12);
  }
}

TEST(QuantileIndices, HandComputedRanks) {
  EXPECT_EQ(quantile_indices(9, 1), (std::vector<std::size_t>{1, 4, 7}));
  EXPECT_EQ(quantile_indices(3, 1), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(quantile_indices(17, 0), (std::vector<std::size_t>{1}));
  EXPECT_EQ(quantile_indices(1, 0), (std::vector<std::size_t>{1}));
}

TEST(QuantileIndices, RejectsTooFewSamples) {
  EXPECT_THROW(quantile_indices(2, 1), std::invalid_argument);
  EXPECT_THROW(quantile_indices(8, 4), std::invalid_argument);
}

TEST(QuantileIndices, StrictlyIncreasingAndInRange) {
  for (int b = 0; b <= 8; ++b) {
    for (std::size_t n = static_cast<std::size_t>(dimension(b)); n < 200; n += 7) {
      const auto r = quantile_indices(n, b);
      ASSERT_EQ(r.front(), 1u);
      ASSERT_LE(r.back(), n);
      for (std::size_t i = 1; i < r.size(); ++i) ASSERT_LT(r[i - 1], r[i]);
    }
  }
}

TEST(ExtractQuantileSamples, DirectIndexing) {
  std::vector<Complex> v;
  for (int i = 1; i <= 9; ++i) v.emplace_back(i / 10.0);
  const SampleSet s(v);
  const ComplexVector g = extract_quantile_samples(s, quantile_indices(9, 1));
  EXPECT_EQ(g(0), Complex(0.1));
  EXPECT_EQ(g(1), Complex(0.4));
  EXPECT_EQ(g(2), Complex(0.7));
}

TEST(ExtractQuantileSamples, ConstantAndOutOfRange) {
  const auto s = observe(constant_field(-0.2), deploy_seeded(20, 9));
  const ComplexVector g = extract_quantile_samples(s, quantile_indices(20, 2));
  for (auto v : g) EXPECT_EQ(v, Complex(-0.2));
  EXPECT_THROW(extract_quantile_samples(s, {0}), std::out_of_range);
  EXPECT_THROW(extract_quantile_samples(s, {21}), std::out_of_range);
}

TEST(ExtractQuantileSamples, FirstRankIsMinimumLocation) {
  ComplexVector a(3);
  a << Complex(0.0, 0.25), 0.0, Complex(0.0, -0.25);
  const FourierCoefficients f(a, true);
  const auto d = deploy_seeded(30, 10);
  const auto u = test_hooks::ordered_locations(d);
  const auto s = observe(f, d);
  EXPECT_EQ(extract_quantile_samples(s, {1})(0), eval_field(f, u.front()));
}

TEST(TestHooks, SelectionMatchesFullSort) {
  const auto d = deploy_seeded(1001, 11);
  const auto sorted = test_hooks::ordered_locations(d);
  const std::vector<std::size_t> ranks = {1, 2, 334, 334, 500, 1001};
  const auto sel = test_hooks::order_statistics(d, ranks);
  for (std::size_t i = 0; i < ranks.size(); ++i) EXPECT_EQ(sel[i], sorted[ranks[i] - 1]);
}

// U_{r:n} ~ Beta(r, n - r + 1).
TEST(OrderStatistics, MarginalLawMatchesBeta) {
  const std::size_t n = 1000;
  const auto r = quantile_indices(n, 2);
  std::vector<QuantileProbe> probes;
  for (std::size_t l = 0; l < r.size(); ++l) probes.push_back({r[l], l / 5.0});
  const auto m = order_statistic_moments(n, probes, 100000, 12);
  for (const auto& q : m) {
    EXPECT_LE(std::abs(q.mean - q.beta.mean), 3.0 * q.mean_stderr) << "rank " << q.rank;
    EXPECT_LE(std::abs(q.variance - q.beta.variance), 3.0 * q.variance_stderr) << "rank " << q.rank;
  }
}

TEST(OrderStatistics, QuantileErrorScalesAsOneOverN) {
  const double p = 1.0 / 3.0;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    const std::size_t rank = n / 3 + 1;
    const auto m = order_statistic_moments(n, {{rank, p}}, 20000, 13);
    const double predicted = p * (1.0 - p);
    EXPECT_NEAR(m[0].n_second_moment, predicted, 0.10 * predicted) << "n=" << n;
    EXPECT_LE(m[0].n_second_moment, 0.25 * (1.0 + 5.0 / std::sqrt(static_cast<double>(n))));
  }
}

TEST(SampleCsv, HeaderRowsAndSidecar) {
  const SampleSet s({Complex(0.1, 0.0), Complex(-0.25, 1e-17)});
  std::ostringstream out;
  write_sample_csv(out, s);
  EXPECT_EQ(out.str(), "value_re,value_im\n0.10000000000000001,0\n-0.25,1.0000000000000001e-17\n");
  std::istringstream in(out.str());
  const SampleSet back = read_sample_csv(in);
  EXPECT_EQ(back.values(), s.values());
  const auto side = sample_sidecar(s, 3, 42);
  EXPECT_EQ(side.at("n"), 2);
  EXPECT_EQ(side.at("b_source"), 3);
  EXPECT_EQ(side.at("seed"), "42");
}

TEST(SampleCsv, RejectsBadInput) {
  std::istringstream no_header("0.1,0\n");
  EXPECT_THROW(read_sample_csv(no_header), std::invalid_argument);
  std::istringstream bad_row("value_re,value_im\n0.1;0\n");
  EXPECT_THROW(read_sample_csv(bad_row), std::invalid_argument);
}
