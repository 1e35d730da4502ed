#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rplm/distributions.hpp"
#include "rplm/estimator.hpp"

namespace rplm {

enum class TestFunctionKind { kSine, kBlocks, kZero };

/// Centered test functions on [0,1]^q.
///  - sine:   prod_s sin(2 pi u_s)
///  - blocks: prod_s b(u_s), b(t) = s(t) - s(1 - t) with s a step profile;
///            odd about 1/2 per axis, so it integrates to zero exactly.
///  - zero:   0
struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::kSine;

  double operator()(std::span<const double> u) const;
  std::string name() const;
  /// Smoothness label used only for the target rate.
  double nominal_alpha() const;

  friend bool operator==(const TestFunction&, const TestFunction&) = default;
};

TestFunction parse_test_function(const std::string& name);

enum class NoiseMode { kEstimate, kKnownAnalytic, kKnownValue };

struct SimulationConfig {
  int q = 1;
  std::vector<double> beta;  // p = beta.size()
  DesignDistribution design;
  ErrorDistribution error;
  TestFunction test_function;
  std::vector<std::size_t> sample_sizes;
  std::size_t replications = 10;
  std::uint64_t seed = 0;
  std::string wavelet = "db4";
  std::optional<int> j0;
  std::optional<std::size_t> block_cardinality;
  NoiseMode noise_mode = NoiseMode::kEstimate;
  double noise_value = 0.0;  // h(0)^{-2} for kKnownValue
  std::optional<std::vector<double>> u0;

  std::size_t p() const noexcept { return beta.size(); }
  /// Estimator settings for sample size n.
  EstimatorConfig estimator_config() const;

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

/// Throws BadValue when the configuration is inconsistent.
void validate(const SimulationConfig& config);

/// h(0)^{-2} of rho = X'beta + xi when it has a closed form (no design or
/// beta = 0; gaussian + gaussian; cauchy + cauchy). Throws UnknownDensityValue otherwise.
double analytic_h_inv_sq(const SimulationConfig& config);

struct Dataset {
  GridDesign design;
  std::vector<double> u;       // row-major n x q, lexicographic grid order
  std::vector<double> y;
  std::vector<double> f_sample;  // f(U_i)
  CubeTensor f_nodes;            // f at the bin nodes l/T
};

/// Y = f(U) + X'beta + xi on the full equispaced grid, with the intercept 0.
Dataset generate_dataset(const SimulationConfig& config, std::size_t n, Rng& rng);

/// Grid average of (f_hat - f_true)^2.
double mise(const CubeTensor& f_hat, const CubeTensor& f_true);

struct ReplicationResult {
  double mise = 0.0;
  std::optional<double> pointwise_sq_error;  // at the node of the bin containing u0
  double h_inv_sq = 0.0;
  double b_hat = 0.0;
  std::uint64_t data_checksum = 0;
};

/// RNG stream seed for replication `index` at sample size n.
std::uint64_t replication_seed(const SimulationConfig& config, std::size_t n, std::size_t index);

ReplicationResult run_replication(const SimulationConfig& config, std::size_t n, std::size_t index);

struct RateEntry {
  std::size_t n = 0;
  double mean_mise = 0.0;
  double se = 0.0;
  std::optional<double> pointwise_mean;
  std::optional<double> pointwise_se;
  double mean_h_inv_sq = 0.0;
};

struct RateStudyReport {
  std::vector<RateEntry> entries;
  double slope = 0.0;                     // OLS of log(mean MISE) on log(n)
  std::optional<double> pointwise_slope;
  double nominal_alpha = 0.0;
  double target_slope = 0.0;              // -2 alpha / (2 alpha + q)
  std::vector<std::string> warnings;
};

/// OLS slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Warnings for (alpha, q) pairs outside the range where the rate targets apply.
std::vector<std::string> smoothness_warnings(double alpha, int q);

/// Needs at least 3 sample sizes and 10 replications.
RateStudyReport rate_study(const SimulationConfig& config);

struct CouplingResult {
  double variance = 0.0;  // of sqrt(4 kappa) h(0) median
  double target = 1.0;
  double mean = 0.0;
  double mean_se = 0.0;
};

/// Draws `repetitions` medians of `kappa` (odd) iid errors and returns the
/// variance of the normalized median.
CouplingResult coupling_check(const ErrorDistribution& error, std::size_t kappa, std::size_t repetitions,
                              std::uint64_t seed);

}  // namespace rplm
