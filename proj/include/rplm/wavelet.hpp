#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rplm/tensor.hpp"

namespace rplm {

/// Orthonormal quadrature-mirror pair; wavelet[k] = (-1)^k scaling[K-1-k].
struct WaveletFilter {
  std::string name;
  std::vector<double> scaling;
  std::vector<double> wavelet;
  int vanishing_moments = 0;

  std::size_t taps() const noexcept { return scaling.size(); }
};

/// Daubechies filters: "haar" (=db1), "db2", "db4". The orthonormality,
/// normalization and moment conditions are checked before returning.
WaveletFilter build_filter(const std::string& name);

/// Names accepted by build_filter.
std::vector<std::string> filter_names();

/// Smallest j with 2^j >= number of taps.
int default_primary_level(const WaveletFilter& filter);

/// Multiresolution coefficients of a T^q tensor (T = 2^J): one gross block of
/// side 2^j0 and, for every level j0 <= j < J, 2^q - 1 detail subbands of side
/// 2^j. Subband i has bit s set when axis s took the high-pass branch.
struct CoefficientPyramid {
  int q = 0;
  int j0 = 0;
  int J = 0;
  CubeTensor gross;
  std::vector<std::vector<CubeTensor>> details;  // [j - j0][i - 1]

  int subbands_per_level() const noexcept { return (1 << q) - 1; }
  CubeTensor& detail(int j, int i) { return details.at(j - j0).at(i - 1); }
  const CubeTensor& detail(int j, int i) const { return details.at(j - j0).at(i - 1); }

  std::size_t coefficient_count() const;
  double energy() const;
  /// Gross block, then levels j0..J-1, subbands 1..2^q-1, each lexicographic.
  std::vector<double> flatten() const;

  /// Same shape, every coefficient zero.
  CoefficientPyramid zeros_like() const;

  friend bool operator==(const CoefficientPyramid&, const CoefficientPyramid&) = default;
};

/// One periodized analysis step on a line of even length N:
/// approx[k] = sum_m h[m] x[(2k+m) mod N], detail[k] = sum_m g[m] x[(2k+m) mod N].
void analysis_step(std::span<const double> line, const WaveletFilter& filter,
                   std::span<double> approx, std::span<double> detail);
/// Adjoint (= inverse) of analysis_step.
void synthesis_step(std::span<const double> approx, std::span<const double> detail,
                    const WaveletFilter& filter, std::span<double> line);

CoefficientPyramid dwt_1d_periodized(std::span<const double> signal, const WaveletFilter& filter, int j0);
CoefficientPyramid dwt_qd(const CubeTensor& tensor, const WaveletFilter& filter, int j0);
CubeTensor idwt_qd(const CoefficientPyramid& pyramid, const WaveletFilter& filter);

/// ||theta_j0||_s + (sum_j (2^{j w} ||theta_j||_s)^t)^{1/t}, w = alpha + q(1/2 - 1/s).
/// `s` and `t` may be +infinity.
double besov_sequence_norm(const CoefficientPyramid& pyramid, double alpha, double s, double t);

}  // namespace rplm
