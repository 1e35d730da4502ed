#include "rplm/robust_medians.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rplm/error.hpp"

namespace rplm {

double sample_median(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyBin, "median of an empty set");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t k = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  const double upper = v[k];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k));
  return 0.5 * (lower + upper);
}

MedianSummary bin_medians(const BinnedData& data) {
  const GridDesign& d = data.design;
  MedianSummary out{CubeTensor(d.q, d.bins_per_axis), CubeTensor(d.q, d.bins_per_axis)};
  if (data.bins.size() != out.full.size() || data.halfbins.size() != out.full.size()) {
    throw Error(ErrorCode::kShapeMismatch, "binned data does not match its design");
  }
  for (std::size_t l = 0; l < out.full.size(); ++l) {
    if (data.bins[l].empty()) throw Error(ErrorCode::kEmptyBin, "bin " + std::to_string(l) + " is empty");
    if (data.halfbins[l].empty()) {
      throw Error(ErrorCode::kEmptyBin, "half-bin " + std::to_string(l) + " is empty");
    }
    out.full[l] = sample_median(data.bins[l]);
    out.half[l] = sample_median(data.halfbins[l]);
  }
  return out;
}

BiasEstimate bias_correction(const MedianSummary& medians) {
  if (!medians.full.same_shape(medians.half) || medians.full.size() == 0) {
    throw Error(ErrorCode::kShapeMismatch, "incomplete median summary");
  }
  double sum = 0.0;
  for (std::size_t l = 0; l < medians.full.size(); ++l) sum += medians.half[l] - medians.full[l];
  return {sum / static_cast<double>(medians.full.size())};
}

NoiseEstimate known_noise_level(double h_inv_sq, std::size_t n) {
  if (!(h_inv_sq > 0.0) || !std::isfinite(h_inv_sq)) {
    throw Error(ErrorCode::kBadValue, "h(0)^{-2} must be positive and finite");
  }
  return {h_inv_sq, std::sqrt(h_inv_sq) / (2.0 * std::sqrt(static_cast<double>(n))), false};
}

NoiseEstimate estimate_noise_level(const MedianSummary& medians, const GridDesign& design) {
  const std::size_t V = medians.full.size();
  if (V < 2) throw Error(ErrorCode::kInsufficientBins, "noise estimate needs at least two bins");
  if (V != design.total_bins) throw Error(ErrorCode::kShapeMismatch, "medians do not match design");
  const std::size_t pairs = V / 2;
  double sum = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    const double diff = medians.full[2 * k] - medians.full[2 * k + 1];
    sum += diff * diff;
  }
  double h_inv_sq = 2.0 * static_cast<double>(design.kappa) / static_cast<double>(pairs) * sum;
  bool degenerate = false;
  if (!(h_inv_sq >= kNoiseFloor)) {
    h_inv_sq = kNoiseFloor;
    degenerate = true;
  }
  NoiseEstimate out = known_noise_level(h_inv_sq, design.n);
  out.degenerate = degenerate;
  return out;
}

}  // namespace rplm
