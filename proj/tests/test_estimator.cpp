#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rplm/distributions.hpp"
#include "rplm/error.hpp"
#include "rplm/estimator.hpp"

using namespace rplm;

namespace {

struct Data {
  std::vector<double> u, y;
  GridDesign d;
};

Data make(std::size_t side, int q, auto&& f, double noise, std::uint64_t seed) {
  Data out;
  out.d = plan_grid(ipow(side, q), q);
  out.u = grid_coordinates(out.d);
  out.y.resize(out.d.n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, noise > 0 ? noise : 1.0);
  const auto qq = static_cast<std::size_t>(q);
  for (std::size_t i = 0; i < out.d.n; ++i) {
    out.y[i] = f(std::span<const double>(out.u).subspan(i * qq, qq)) + (noise > 0 ? z(rng) : 0.0);
  }
  return out;
}

double sine2(std::span<const double> u) {
  double v = 1.0;
  for (double c : u) v *= std::sin(2 * std::numbers::pi * c);
  return v;
}

}  // namespace

TEST(Fit, NoShrinkNoBiasReproducesMedians) {
  for (const char* w : {"haar", "db2", "db4"}) {
    const auto data = make(33, 2, sine2, 0.5, 1);
    EstimatorConfig c;
    c.filter_name = w;
    c.shrinkage_enabled = false;
    c.bias_correction_enabled = false;
    const auto r = fit(data.u, data.y, 2, c);
    EXPECT_EQ(r.b_hat, 0.0);
    for (std::size_t k = 0; k < r.f_hat.size(); ++k) EXPECT_NEAR(r.f_hat[k], r.medians[k], 1e-10) << w;
  }
}

TEST(Fit, NoiselessConstantGivesClampAndExactness) {
  const auto data = make(65, 2, [](auto) { return 0.75; }, 0.0, 0);
  EstimatorConfig c;
  c.filter_name = "db2";
  c.j0 = 1;
  const auto r = fit(data.u, data.y, 2, c);
  EXPECT_TRUE(r.noise.degenerate);
  for (std::size_t lvl = 0; lvl < r.diagnostics.blocks_per_level.size(); ++lvl) {
    EXPECT_EQ(r.diagnostics.zeroed_per_level[lvl], r.diagnostics.blocks_per_level[lvl]);
  }
  for (std::size_t k = 0; k < r.f_hat.size(); ++k) EXPECT_NEAR(r.f_hat[k], 0.75, 1e-12);
}

TEST(Fit, ShiftEquivariance) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int q = 1 + trial % 2;
    const auto data = make(q == 1 ? 257 : 33, q, sine2, 0.3, 100 + trial);
    std::uniform_real_distribution<double> cu(-20, 20);
    const double c = cu(rng);
    auto shifted = data.y;
    for (auto& v : shifted) v += c;
    EstimatorConfig cfg;
    cfg.filter_name = trial % 3 == 0 ? "haar" : "db2";
    const auto a = fit(data.u, data.y, q, cfg);
    const auto b = fit(data.u, shifted, q, cfg);
    ASSERT_NEAR(b.b_hat, a.b_hat, 1e-9);
    ASSERT_NEAR(b.noise.h_inv_sq, a.noise.h_inv_sq, 1e-8 * a.noise.h_inv_sq);
    for (std::size_t k = 0; k < a.f_hat.size(); ++k) ASSERT_NEAR(b.f_hat[k], a.f_hat[k] + c, 1e-8);
  }
}

TEST(Fit, Deterministic) {
  const auto data = make(129, 2, sine2, 1.0, 5);
  const auto a = fit(data.u, data.y, 2, {});
  const auto b = fit(data.u, data.y, 2, {});
  EXPECT_EQ(a.f_hat, b.f_hat);
  EXPECT_EQ(a.b_hat, b.b_hat);
  EXPECT_EQ(a.noise.h_inv_sq, b.noise.h_inv_sq);
}

TEST(Fit, KnownNoiseIsUsed) {
  const auto data = make(65, 2, sine2, 1.0, 9);
  EstimatorConfig c;
  c.known_h_inv_sq = 2 * std::numbers::pi;
  const auto r = fit(data.u, data.y, 2, c);
  EXPECT_EQ(r.noise.h_inv_sq, 2 * std::numbers::pi);
  EXPECT_FALSE(r.noise.degenerate);
}

// Noiseless q = 1 pipeline: error against f at the nodes shrinks as T grows.
TEST(Fit, NoiselessErrorDecreasesWithResolution) {
  auto f = [](std::span<const double> u) { return std::sin(2 * std::numbers::pi * u[0]) + 0.5 * std::cos(4 * std::numbers::pi * u[0]); };
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n : {16u, 64u, 128u}) {  // T = 8, 16, 32
    const GridDesign d = plan_grid(n, 1);
    const auto data = make(n, 1, f, 0.0, 0);
    EstimatorConfig c;
    c.filter_name = "db2";
    const auto r = fit(data.u, data.y, 1, c);
    double err = 0.0;
    for (std::size_t l = 0; l < d.bins_per_axis; ++l) {
      const double node = static_cast<double>(l + 1) / static_cast<double>(d.bins_per_axis);
      err += std::pow(r.f_hat[l] - f(std::span<const double>(&node, 1)), 2);
    }
    err /= static_cast<double>(d.bins_per_axis);
    EXPECT_LT(err, prev) << "T=" << d.bins_per_axis;
    prev = err;
  }
}

TEST(Fit, ShrinkageBeatsRawMedians) {
  double mise_fit = 0.0, mise_raw = 0.0;
  for (int r = 0; r < 30; ++r) {
    const auto data = make(256, 2, sine2, 1.0, 1000 + r);
    const auto res = fit(data.u, data.y, 2, {});
    const auto T = res.design.bins_per_axis;
    for (std::size_t a = 0; a < T; ++a) {
      for (std::size_t b = 0; b < T; ++b) {
        const double node[2] = {(a + 1.0) / T, (b + 1.0) / T};
        const double truth = sine2(node);
        mise_fit += std::pow(res.f_hat[a * T + b] - truth, 2);
        mise_raw += std::pow(res.medians[a * T + b] - truth, 2);
      }
    }
  }
  EXPECT_LT(mise_fit, mise_raw);
}

TEST(EvaluateOnGrid, LayoutAndValues) {
  const auto data = make(33, 2, sine2, 0.2, 4);
  const auto r = fit(data.u, data.y, 2, {});
  const auto vals = evaluate_on_grid(r, r.design);
  ASSERT_EQ(vals.size(), r.design.total_bins);
  const auto T = static_cast<double>(r.design.bins_per_axis);
  for (std::size_t k = 0; k < vals.size(); ++k) {
    EXPECT_EQ(vals[k].value, r.f_hat[k]);
    EXPECT_EQ(vals[k].point[0], static_cast<double>(k / r.design.bins_per_axis + 1) / T);
    EXPECT_EQ(vals[k].point[1], static_cast<double>(k % r.design.bins_per_axis + 1) / T);
  }
  auto other = plan_grid(256, 1);
  try {
    evaluate_on_grid(r, other);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
}
