#include "rplm/blockjs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rplm/error.hpp"

namespace rplm {

double solve_lambda_star() {
  static const double root = [] {
    // lambda - ln(lambda) is increasing on (1, inf); bisection on [1, 10].
    double lo = 1.0;
    double hi = 10.0;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (mid - std::log(mid) - 3.0 < 0.0 ? lo : hi) = mid;
    }
    const double a = std::abs(lo - std::log(lo) - 3.0);
    const double b = std::abs(hi - std::log(hi) - 3.0);
    return a <= b ? lo : hi;
  }();
  return root;
}

std::size_t default_block_cardinality(std::size_t n) {
  const double l = std::floor(std::log(static_cast<double>(std::max<std::size_t>(n, 1))));
  return std::max<std::size_t>(1, static_cast<std::size_t>(l));
}

ShrinkageConfig make_shrinkage_config(std::size_t block_cardinality, std::size_t n, double h_inv_sq) {
  if (block_cardinality < 1) throw Error(ErrorCode::kBadValue, "block cardinality must be >= 1");
  if (n < 1) throw Error(ErrorCode::kBadValue, "sample size must be positive");
  if (!(h_inv_sq > 0.0) || !std::isfinite(h_inv_sq)) throw Error(ErrorCode::kBadValue, "h(0)^{-2} must be positive");
  return {solve_lambda_star(), block_cardinality, n, h_inv_sq};
}

PyramidShape shape_of(const CoefficientPyramid& pyramid) { return {pyramid.q, pyramid.j0, pyramid.J}; }

std::size_t Block::cardinality() const {
  std::size_t c = 1;
  for (std::size_t e : extent) c *= e;
  return c;
}

std::size_t block_side(std::size_t cardinality, int q) {
  std::size_t side = 1;
  while (ipow(side + 1, q) <= cardinality) ++side;
  return side;
}

BlockPartition partition_blocks(const PyramidShape& shape, const ShrinkageConfig& config) {
  if (shape.q < 1 || shape.j0 < 0 || shape.J < shape.j0) throw Error(ErrorCode::kBadShape, "invalid pyramid shape");
  BlockPartition part;
  part.shape = shape;
  part.side = block_side(config.block_cardinality, shape.q);
  const auto q = static_cast<std::size_t>(shape.q);
  for (int j = shape.j0; j < shape.J; ++j) {
    const std::size_t n_side = std::size_t{1} << j;
    const std::size_t tiles = (n_side + part.side - 1) / part.side;
    std::vector<Block> blocks;
    std::vector<std::size_t> tile(q, 0);
    const std::size_t count = ipow(tiles, shape.q);
    blocks.reserve(count);
    for (std::size_t b = 0; b < count; ++b) {
      std::size_t rem = b;
      for (std::size_t s = q; s-- > 0;) {
        tile[s] = rem % tiles;
        rem /= tiles;
      }
      Block blk;
      blk.origin.resize(q);
      blk.extent.resize(q);
      for (std::size_t s = 0; s < q; ++s) {
        blk.origin[s] = tile[s] * part.side;
        blk.extent[s] = std::min(part.side, n_side - blk.origin[s]);
      }
      blocks.push_back(std::move(blk));
    }
    for (int i = 1; i < (1 << shape.q); ++i) part.subbands.push_back({j, i, blocks});
  }
  return part;
}

namespace {

template <typename Fn>
void for_each_in_block(const CubeTensor& band, const Block& block, Fn&& fn) {
  const std::size_t q = block.origin.size();
  std::vector<std::size_t> offset(q, 0), idx(q);
  const std::size_t count = block.cardinality();
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t s = 0; s < q; ++s) idx[s] = block.origin[s] + offset[s];
    fn(band.flat_index(idx));
    for (std::size_t s = q; s-- > 0;) {
      if (++offset[s] < block.extent[s]) break;
      offset[s] = 0;
    }
  }
}

}  // namespace

double block_energy(const CubeTensor& band, const Block& block) {
  double e = 0.0;
  for_each_in_block(band, block, [&](std::size_t f) { e += band[f] * band[f]; });
  return e;
}

double shrinkage_factor(double energy, std::size_t block_cardinality, const ShrinkageConfig& config) {
  if (!(energy > 0.0)) return 0.0;
  const double threshold =
      config.lambda_star * static_cast<double>(block_cardinality) * config.h_inv_sq;
  const double factor = 1.0 - threshold / (4.0 * static_cast<double>(config.n) * energy);
  return factor > 0.0 ? factor : 0.0;
}

ShrinkResult shrink(const CoefficientPyramid& pyramid, const BlockPartition& partition,
                    const ShrinkageConfig& config) {
  const PyramidShape shape = shape_of(pyramid);
  if (shape.q != partition.shape.q || shape.j0 != partition.shape.j0 || shape.J != partition.shape.J) {
    throw Error(ErrorCode::kShapeMismatch, "partition does not match pyramid");
  }
  ShrinkResult out{pyramid, {}};
  const auto levels = static_cast<std::size_t>(shape.J - shape.j0);
  auto& diag = out.diagnostics;
  diag.blocks_per_level.assign(levels, 0);
  diag.zeroed_per_level.assign(levels, 0);
  double factor_sum = 0.0;
  std::size_t factor_count = 0;
  for (const auto& sb : partition.subbands) {
    CubeTensor& band = out.pyramid.detail(sb.level, sb.subband);
    const auto lvl = static_cast<std::size_t>(sb.level - shape.j0);
    for (const Block& blk : sb.blocks) {
      const double factor = shrinkage_factor(block_energy(band, blk), blk.cardinality(), config);
      for_each_in_block(band, blk, [&](std::size_t f) { band[f] *= factor; });
      ++diag.blocks_per_level[lvl];
      if (factor == 0.0) ++diag.zeroed_per_level[lvl];
      diag.min_factor = std::min(diag.min_factor, factor);
      diag.max_factor = std::max(diag.max_factor, factor);
      factor_sum += factor;
      ++factor_count;
    }
  }
  if (factor_count > 0) {
    diag.mean_factor = factor_sum / static_cast<double>(factor_count);
  } else {
    diag.min_factor = diag.max_factor = 1.0;
  }
  return out;
}

}  // namespace rplm
