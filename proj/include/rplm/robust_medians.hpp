#pragma once

#include <span>

#include "rplm/grid_binning.hpp"
#include "rplm/tensor.hpp"

namespace rplm {

/// Floor applied to the noise estimate when all paired medians coincide.
inline constexpr double kNoiseFloor = 1e-12;

/// Odd count: middle order statistic. Even count: mean of the two middle
/// order statistics. Throws EmptyBin on empty input.
double sample_median(std::span<const double> values);

/// Bin and half-bin medians laid out as T^q tensors.
struct MedianSummary {
  CubeTensor full;  // Q_l
  CubeTensor half;  // Q*_l
};

struct BiasEstimate {
  double b_hat = 0.0;
};

struct NoiseEstimate {
  double h_inv_sq = 0.0;  // estimate of h(0)^{-2}
  double sigma = 0.0;     // coefficient noise level sqrt(h_inv_sq) / (2 sqrt(n))
  bool degenerate = false;  // raw estimate fell below kNoiseFloor and was clamped
};

MedianSummary bin_medians(const BinnedData& data);

/// Mean over all bins of (Q*_l - Q_l); a single scalar applied to every bin.
BiasEstimate bias_correction(const MedianSummary& medians);

/// Pairs bins (2k-1, 2k) in lexicographic order and returns
/// (2 kappa / floor(V/2)) * sum_k (Q_{2k-1} - Q_{2k})^2.
NoiseEstimate estimate_noise_level(const MedianSummary& medians, const GridDesign& design);

/// Builds a NoiseEstimate from a known h(0)^{-2}.
NoiseEstimate known_noise_level(double h_inv_sq, std::size_t n);

}  // namespace rplm
