#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rplm/blockjs.hpp"
#include "rplm/grid_binning.hpp"
#include "rplm/robust_medians.hpp"
#include "rplm/wavelet.hpp"

namespace rplm {

struct EstimatorConfig {
  std::string filter_name = "db4";
  std::optional<int> j0;                           // default: default_primary_level, capped at J
  std::optional<std::size_t> block_cardinality;    // default: floor(ln n)
  std::optional<double> known_h_inv_sq;            // unset: estimate from the medians
  bool shrinkage_enabled = true;
  bool bias_correction_enabled = true;

  friend bool operator==(const EstimatorConfig&, const EstimatorConfig&) = default;
};

struct FitResult {
  GridDesign design;
  CubeTensor f_hat;    // estimates at the bin nodes l/T
  CubeTensor medians;  // raw bin medians Q_l
  double b_hat = 0.0;
  NoiseEstimate noise;
  int j0 = 0;
  std::size_t block_cardinality = 0;
  ShrinkageDiagnostics diagnostics;
};

/// Bin, take medians, transform Q/sqrt(V), shrink the detail blocks, invert,
/// rescale by sqrt(V) and subtract the global bias estimate.
/// `u` is row-major n x q on the grid {0, 1/m, ..., 1}^q.
FitResult fit(std::span<const double> u, std::span<const double> y, int q, const EstimatorConfig& config);

/// Same pipeline starting from binned data.
FitResult fit_binned(const BinnedData& data, const EstimatorConfig& config);

struct GridValue {
  std::vector<double> point;  // l/T per axis, l = 1..T
  double value = 0.0;
};

/// All V bin nodes in lexicographic order with their estimates.
std::vector<GridValue> evaluate_on_grid(const FitResult& result, const GridDesign& design);

}  // namespace rplm
