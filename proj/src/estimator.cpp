#include "rplm/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "rplm/error.hpp"

namespace rplm {

FitResult fit(std::span<const double> u, std::span<const double> y, int q, const EstimatorConfig& config) {
  const GridDesign design = plan_grid(y.size(), q);
  return fit_binned(bin_observations(u, y, design), config);
}

FitResult fit_binned(const BinnedData& data, const EstimatorConfig& config) {
  const GridDesign& design = data.design;
  const WaveletFilter filter = build_filter(config.filter_name);

  FitResult r;
  r.design = design;
  const MedianSummary medians = bin_medians(data);
  r.medians = medians.full;
  r.b_hat = config.bias_correction_enabled ? bias_correction(medians).b_hat : 0.0;
  if (config.known_h_inv_sq) {
    r.noise = known_noise_level(*config.known_h_inv_sq, design.n);
  } else {
    r.noise = estimate_noise_level(medians, design);
  }

  r.j0 = config.j0.value_or(std::min(default_primary_level(filter), design.resolution));
  r.block_cardinality = config.block_cardinality.value_or(default_block_cardinality(design.n));

  const double root_v = std::sqrt(static_cast<double>(design.total_bins));
  CubeTensor scaled = medians.full;
  for (double& v : scaled.values()) v /= root_v;

  CoefficientPyramid coeffs = dwt_qd(scaled, filter, r.j0);
  if (config.shrinkage_enabled) {
    const ShrinkageConfig sc = make_shrinkage_config(r.block_cardinality, design.n, r.noise.h_inv_sq);
    ShrinkResult shrunk = shrink(coeffs, partition_blocks(shape_of(coeffs), sc), sc);
    coeffs = std::move(shrunk.pyramid);
    r.diagnostics = std::move(shrunk.diagnostics);
  }

  r.f_hat = idwt_qd(coeffs, filter);
  if (!r.f_hat.same_shape(medians.full)) throw Error(ErrorCode::kShapeMismatch, "reconstruction shape");
  for (double& v : r.f_hat.values()) v = v * root_v - r.b_hat;
  return r;
}

std::vector<GridValue> evaluate_on_grid(const FitResult& result, const GridDesign& design) {
  if (result.f_hat.dims() != design.q || result.f_hat.side() != design.bins_per_axis) {
    throw Error(ErrorCode::kShapeMismatch, "estimate does not match the design");
  }
  const auto q = static_cast<std::size_t>(design.q);
  const auto T = static_cast<double>(design.bins_per_axis);
  std::vector<GridValue> out;
  out.reserve(result.f_hat.size());
  std::vector<std::size_t> idx(q);
  for (std::size_t f = 0; f < result.f_hat.size(); ++f) {
    result.f_hat.unflatten(f, idx);
    GridValue gv;
    gv.point.resize(q);
    for (std::size_t s = 0; s < q; ++s) gv.point[s] = static_cast<double>(idx[s] + 1) / T;
    gv.value = result.f_hat[f];
    out.push_back(std::move(gv));
  }
  return out;
}

}  // namespace rplm
