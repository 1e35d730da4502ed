#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rplm/distributions.hpp"
#include "rplm/error.hpp"
#include "rplm/robust_medians.hpp"
#include "rplm/simulation.hpp"
#include "support.hpp"

using namespace rplm;

namespace {

SimulationConfig base_config() {
  SimulationConfig c;
  c.q = 2;
  c.error = {ErrorKind::kGaussian, 1.0};
  c.test_function = {TestFunctionKind::kSine};
  c.sample_sizes = {1089};
  return c;
}

double sample_median_copy(std::vector<double> v) { return oracle::sorted_median(std::move(v)); }

}  // namespace

TEST(Streams, DistinctAndStable) {
  EXPECT_EQ(derive_stream_seed(1, 2, 3, 4), derive_stream_seed(1, 2, 3, 4));
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t a = 0; a < 10; ++a)
    for (std::uint64_t b = 0; b < 10; ++b) seeds.push_back(derive_stream_seed(0, a, b, 1));
  std::sort(seeds.begin(), seeds.end());
  EXPECT_EQ(std::adjacent_find(seeds.begin(), seeds.end()), seeds.end());
}

TEST(ErrorLaws, ParseAndDensity) {
  EXPECT_EQ(parse_error_distribution("gaussian(2)"), (ErrorDistribution{ErrorKind::kGaussian, 2.0}));
  EXPECT_EQ(parse_error_distribution("cauchy").kind, ErrorKind::kCauchy);
  EXPECT_NEAR(density_at_median({ErrorKind::kGaussian, 1.0}), 1 / std::sqrt(2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(density_at_median({ErrorKind::kCauchy, 1.0}), 1 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(density_at_median({ErrorKind::kLaplace, 0.5}), 1.0, 1e-15);
  EXPECT_NEAR(density_at_median({ErrorKind::kShiftedExponential, 0.0}), 0.5, 1e-15);
  EXPECT_FALSE(is_symmetric({ErrorKind::kShiftedExponential, 0.0}));
  for (const char* s : {"gaussian(0.5)", "cauchy(2)", "student_t(3)", "laplace(0.25)", "shifted_exponential"}) {
    EXPECT_EQ(to_string(parse_error_distribution(s)), to_string(parse_error_distribution(to_string(parse_error_distribution(s)))));
  }
  try {
    density_at_median({ErrorKind::kGaussian, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownDensityValue);
  }
}

TEST(ErrorLaws, EmpiricalMedianIsZero) {
  for (const char* s : {"gaussian(1)", "cauchy", "student_t(3)", "laplace(1)", "shifted_exponential"}) {
    const auto e = parse_error_distribution(s);
    Rng rng(77);
    std::vector<double> v(100001);
    for (auto& x : v) x = sample_error(e, rng);
    EXPECT_NEAR(sample_median_copy(v), 0.0, 0.02) << s;
  }
}

TEST(Elliptical, GaussianCovariance) {
  DesignDistribution d = parse_design_distribution("gaussian");
  Rng rng(1);
  const std::size_t p = 3, count = 100000;
  const auto x = sample_elliptical(d, p, count, rng);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < count; ++i) s += x[i * p + a] * x[i * p + b];
      EXPECT_NEAR(s / count, a == b ? 1.0 : 0.0, 0.05);
    }
  }
}

TEST(Elliptical, CauchyMediansAndProjection) {
  const DesignDistribution d = parse_design_distribution("cauchy([[1,0.5],[0.5,2]])");
  ASSERT_EQ(d.covariance.size(), 4u);
  Rng rng(2);
  const std::size_t count = 100000;
  const auto x = sample_elliptical(d, 2, count, rng);
  std::vector<double> c0(count), c1(count), proj(count);
  for (std::size_t i = 0; i < count; ++i) {
    c0[i] = x[2 * i];
    c1[i] = x[2 * i + 1];
    proj[i] = 0.7 * c0[i] - 1.3 * c1[i];
  }
  EXPECT_NEAR(sample_median_copy(c0), 0.0, 0.02);
  EXPECT_NEAR(sample_median_copy(c1), 0.0, 0.02);
  EXPECT_NEAR(sample_median_copy(proj), 0.0, 0.02);
  for (const char* s : {"student_t(3)", "laplace", "gaussian([[2,0],[0,1]])"}) {
    const auto dd = parse_design_distribution(s);
    Rng r2(3);
    const auto xx = sample_elliptical(dd, 2, count, r2);
    std::vector<double> pr(count);
    for (std::size_t i = 0; i < count; ++i) pr[i] = xx[2 * i] + 2 * xx[2 * i + 1];
    EXPECT_NEAR(sample_median_copy(pr), 0.0, 0.02) << s;
  }
}

TEST(Elliptical, BadCovariance) {
  const DesignDistribution d = parse_design_distribution("gaussian([[1,2],[2,1]])");
  Rng rng(0);
  try {
    sample_elliptical(d, 2, 10, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadCovariance);
  }
}

TEST(TestFunctions, CenteredOnGrid) {
  for (auto kind : {TestFunctionKind::kSine, TestFunctionKind::kBlocks, TestFunctionKind::kZero}) {
    const TestFunction f{kind};
    for (int q = 1; q <= 3; ++q) {
      const GridDesign d = plan_grid(ipow(q == 3 ? 17 : 65, q), q);
      const auto u = grid_coordinates(d);
      double s = 0.0;
      const auto qq = static_cast<std::size_t>(q);
      for (std::size_t i = 0; i < d.n; ++i) {
        const double v = f(std::span<const double>(u).subspan(i * qq, qq));
        ASSERT_TRUE(std::isfinite(v));
        s += v;
      }
      EXPECT_NEAR(s / static_cast<double>(d.n), 0.0, 1e-9) << f.name() << " q=" << q;
    }
  }
}

TEST(GenerateDataset, NoiselessEqualsFunction) {
  auto c = base_config();
  c.error = {ErrorKind::kGaussian, 0.0};
  Rng rng(1);
  const auto ds = generate_dataset(c, 1089, rng);
  for (std::size_t i = 0; i < ds.y.size(); ++i) EXPECT_EQ(ds.y[i], ds.f_sample[i]);
}

TEST(GenerateDataset, NoDesignMeansErrorOnly) {
  auto c = base_config();
  c.beta = {5.0, -2.0};
  c.design = {};  // none
  Rng r1(4), r2(4);
  const auto ds = generate_dataset(c, 1089, r1);
  for (std::size_t i = 0; i < ds.y.size(); ++i) {
    EXPECT_EQ(ds.y[i], ds.f_sample[i] + sample_error(c.error, r2));
  }
}

TEST(GenerateDataset, SeedDeterminism) {
  auto c = base_config();
  c.beta = {1.0};
  c.design = parse_design_distribution("cauchy");
  Rng r1(9), r2(9);
  EXPECT_EQ(generate_dataset(c, 1089, r1).y, generate_dataset(c, 1089, r2).y);
}

TEST(Mise, Examples) {
  CubeTensor a(2, 2, 0.0), b(2, 2, 1.0);
  EXPECT_EQ(mise(a, b), 1.0);
  EXPECT_EQ(mise(b, b), 0.0);
  CubeTensor c(2, 2, 1.25);
  EXPECT_DOUBLE_EQ(mise(c, b), 0.0625);
  try {
    mise(a, CubeTensor(1, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
}

TEST(Replication, DeterminismAndSeparation) {
  auto c = base_config();
  c.error = {ErrorKind::kCauchy, 1.0};
  c.u0 = std::vector<double>{0.3, 0.7};
  const auto a = run_replication(c, 1089, 3);
  const auto b = run_replication(c, 1089, 3);
  EXPECT_EQ(a.mise, b.mise);
  EXPECT_EQ(a.data_checksum, b.data_checksum);
  EXPECT_EQ(*a.pointwise_sq_error, *b.pointwise_sq_error);
  EXPECT_NE(run_replication(c, 1089, 4).data_checksum, a.data_checksum);
  EXPECT_TRUE(std::isfinite(a.mise));
}

TEST(Replication, DeterminismProperty) {
  auto c = base_config();
  c.sample_sizes = {289};
  c.beta = {0.5, 1.0};
  c.design = parse_design_distribution("student_t(3)");
  for (std::size_t i = 0; i < 100; ++i) {
    c.seed = i * 7919;
    const auto a = run_replication(c, 289, i);
    const auto b = run_replication(c, 289, i);
    ASSERT_EQ(a.mise, b.mise);
    ASSERT_EQ(a.data_checksum, b.data_checksum);
  }
}

TEST(Analytic, ClosedForms) {
  auto c = base_config();
  EXPECT_NEAR(analytic_h_inv_sq(c), 2 * std::numbers::pi, 1e-12);
  c.design = parse_design_distribution("gaussian");
  c.beta = {1.0};
  EXPECT_NEAR(analytic_h_inv_sq(c), 2 * std::numbers::pi * 2.0, 1e-12);
  c.error = {ErrorKind::kCauchy, 1.0};
  c.design = parse_design_distribution("cauchy");
  c.beta = {3.0, 4.0};
  EXPECT_NEAR(analytic_h_inv_sq(c), std::pow(6.0 * std::numbers::pi, 2), 1e-9);
  c.design = parse_design_distribution("laplace");
  EXPECT_THROW(analytic_h_inv_sq(c), Error);
}

TEST(RateStudy, NoiselessMiseDecreases) {
  SimulationConfig c;
  c.q = 1;
  c.error = {ErrorKind::kGaussian, 0.0};
  c.test_function = {TestFunctionKind::kSine};
  c.sample_sizes = {256, 1024, 4096};
  c.wavelet = "db2";
  c.noise_mode = NoiseMode::kKnownValue;
  c.noise_value = 1e-12;
  const auto rep = rate_study(c);
  ASSERT_EQ(rep.entries.size(), 3u);
  EXPECT_GT(rep.entries[0].mean_mise, rep.entries[1].mean_mise);
  EXPECT_GT(rep.entries[1].mean_mise, rep.entries[2].mean_mise);
  EXPECT_TRUE(std::isfinite(rep.slope));
  EXPECT_NEAR(rep.target_slope, -0.8, 1e-12);
}

TEST(RateStudy, Preconditions) {
  auto c = base_config();
  c.sample_sizes = {289, 1089};
  EXPECT_THROW(rate_study(c), Error);
  c.sample_sizes = {289, 1089, 4225};
  c.replications = 5;
  EXPECT_THROW(rate_study(c), Error);
}

TEST(RateStudy, Slope) {
  const std::vector<double> x = {10, 100, 1000}, y = {1, 0.1, 0.01};
  EXPECT_NEAR(loglog_slope(x, y), -1.0, 1e-12);
}

TEST(RateStudy, SmoothnessWarnings) {
  EXPECT_TRUE(smoothness_warnings(2.0, 2).empty());
  EXPECT_FALSE(smoothness_warnings(0.3, 2).empty());
  EXPECT_FALSE(smoothness_warnings(0.5, 2).empty());
}

TEST(Coupling, Examples) {
  EXPECT_THROW(coupling_check({ErrorKind::kGaussian, 1.0}, 100, 10, 0), Error);
  const auto r = coupling_check({ErrorKind::kLaplace, 1.0}, 101, 4000, 1);
  EXPECT_LT(std::abs(r.mean), 3 * r.mean_se);
  EXPECT_EQ(r.target, 1.0);
}

TEST(Bias, ZeroMeanUnderSymmetricErrors) {
  SimulationConfig c;
  c.q = 2;
  c.error = {ErrorKind::kGaussian, 1.0};
  c.test_function = {TestFunctionKind::kZero};
  std::vector<double> b;
  for (std::size_t r = 0; r < 50; ++r) b.push_back(run_replication(c, 65536, r).b_hat);
  const double mean = std::accumulate(b.begin(), b.end(), 0.0) / 50;
  double ss = 0.0;
  for (double v : b) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / 49 / 50);
  EXPECT_LT(std::abs(mean), 2 * se);
}

TEST(HeavyTail, ResponsesExplodeMediansDoNot) {
  SimulationConfig c;
  c.q = 2;
  c.error = {ErrorKind::kCauchy, 1.0};
  c.test_function = {TestFunctionKind::kSine};
  int good = 0;
  const int reps = 20;
  for (int r = 0; r < reps; ++r) {
    Rng rng(replication_seed(c, 65536, static_cast<std::size_t>(r)));
    const auto ds = generate_dataset(c, 65536, rng);
    const auto med = bin_medians(bin_observations(ds.u, ds.y, ds.design));
    double my = 0.0, mq = 0.0;
    for (double v : ds.y) my = std::max(my, std::abs(v));
    for (double v : med.full.values()) mq = std::max(mq, std::abs(v));
    good += my / mq > 100.0;
  }
  EXPECT_GE(good, (9 * reps + 9) / 10);
}

// One axis: the half-bin median carries twice the per-bin median bias, so
// the mean of Q* - Q estimates that bias directly.
TEST(Bias, CorrectionHelpsUnderAsymmetricErrors) {
  SimulationConfig c;
  c.q = 1;
  c.error = {ErrorKind::kShiftedExponential, 0.0};
  c.test_function = {TestFunctionKind::kSine};
  c.wavelet = "db2";
  double with = 0.0, without = 0.0;
  for (std::size_t r = 0; r < 30; ++r) {
    Rng rng(replication_seed(c, 4096, r));
    const auto ds = generate_dataset(c, 4096, rng);
    auto ec = c.estimator_config();
    const auto a = fit(ds.u, ds.y, 1, ec);
    ec.bias_correction_enabled = false;
    const auto b = fit(ds.u, ds.y, 1, ec);
    const double truth = std::accumulate(ds.f_nodes.values().begin(), ds.f_nodes.values().end(), 0.0);
    const auto V = static_cast<double>(ds.f_nodes.size());
    with += std::accumulate(a.f_hat.values().begin(), a.f_hat.values().end(), 0.0) / V - truth / V;
    without += std::accumulate(b.f_hat.values().begin(), b.f_hat.values().end(), 0.0) / V - truth / V;
  }
  EXPECT_LT(std::abs(with / 30), std::abs(without / 30));
}
