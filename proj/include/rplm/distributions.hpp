#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rplm {

using Rng = std::mt19937_64;

/// Seed for an independent stream identified by (seed, a, b, stream), mixed
/// with splitmix64 so neighbouring ids give unrelated generators.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t stream);

enum class ErrorKind { kGaussian, kCauchy, kStudentT, kLaplace, kShiftedExponential };

/// Univariate error law. `param` is the scale (gaussian, cauchy, laplace) or
/// the degrees of freedom (student_t); shifted_exponential has no parameter
/// and density e^{-(x + ln 2)} on x >= -ln 2 (median 0).
struct ErrorDistribution {
  ErrorKind kind = ErrorKind::kGaussian;
  double param = 1.0;

  friend bool operator==(const ErrorDistribution&, const ErrorDistribution&) = default;
};

double sample_error(const ErrorDistribution& dist, Rng& rng);
/// Density at the median, h(0). Throws UnknownDensityValue for degenerate laws.
double density_at_median(const ErrorDistribution& dist);
bool is_symmetric(const ErrorDistribution& dist);
std::string to_string(const ErrorDistribution& dist);
/// Parses e.g. "gaussian(1)", "cauchy", "student_t(3)", "laplace(0.5)",
/// "shifted_exponential".
ErrorDistribution parse_error_distribution(const std::string& text);

enum class DesignKind { kNone, kGaussian, kStudentT, kCauchy, kLaplace };

/// Centered elliptical law for the linear covariates X. An empty covariance
/// means the identity.
struct DesignDistribution {
  DesignKind kind = DesignKind::kNone;
  double dof = 0.0;                 // student_t only
  std::vector<double> covariance;   // row-major p x p

  friend bool operator==(const DesignDistribution&, const DesignDistribution&) = default;
};

/// `count` draws of dimension p, row-major. Gaussian via the Cholesky factor
/// of the covariance; student_t(nu) as gaussian / sqrt(chi2_nu / nu); cauchy as
/// student_t(1); laplace as sqrt(W) * gaussian with W ~ Exp(1).
std::vector<double> sample_elliptical(const DesignDistribution& dist, std::size_t p, std::size_t count, Rng& rng);
std::string to_string(const DesignDistribution& dist);
/// Parses e.g. "none", "gaussian", "cauchy([[1,0.5],[0.5,1]])", "student_t(3)",
/// "student_t(3, [[2,0],[0,1]])", "laplace".
DesignDistribution parse_design_distribution(const std::string& text);

}  // namespace rplm
