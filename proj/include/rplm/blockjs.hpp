#pragma once

#include <cstddef>
#include <vector>

#include "rplm/wavelet.hpp"

namespace rplm {

/// Root > 1 of lambda - ln(lambda) = 3 (about 4.50524), computed once.
double solve_lambda_star();

struct ShrinkageConfig {
  double lambda_star = 0.0;
  std::size_t block_cardinality = 1;  // target L
  std::size_t n = 0;
  double h_inv_sq = 0.0;  // estimate of h(0)^{-2}

  /// Coefficient noise variance h(0)^{-2} / (4n).
  double noise_variance() const { return h_inv_sq / (4.0 * static_cast<double>(n)); }
};

/// L = max(1, floor(ln n)).
std::size_t default_block_cardinality(std::size_t n);

/// Validates and fills lambda_star.
ShrinkageConfig make_shrinkage_config(std::size_t block_cardinality, std::size_t n, double h_inv_sq);

struct PyramidShape {
  int q = 0;
  int j0 = 0;
  int J = 0;
};

PyramidShape shape_of(const CoefficientPyramid& pyramid);

/// Axis-aligned box of coefficient positions inside one subband.
struct Block {
  std::vector<std::size_t> origin;
  std::vector<std::size_t> extent;
  std::size_t cardinality() const;
};

struct SubbandBlocks {
  int level = 0;
  int subband = 0;  // 1 .. 2^q - 1
  std::vector<Block> blocks;
};

struct BlockPartition {
  PyramidShape shape;
  std::size_t side = 1;  // hypercube side l = max(1, floor(L^{1/q}))
  std::vector<SubbandBlocks> subbands;
};

/// Largest integer l >= 1 with l^q <= L.
std::size_t block_side(std::size_t cardinality, int q);

/// Tiles every detail subband with hypercubes of side block_side(L, q);
/// trailing blocks along an axis are shortened when 2^j is not a multiple.
BlockPartition partition_blocks(const PyramidShape& shape, const ShrinkageConfig& config);

/// Sum of squared coefficients of `band` inside `block`.
double block_energy(const CubeTensor& band, const Block& block);

struct ShrinkageDiagnostics {
  std::vector<std::size_t> blocks_per_level;  // indexed by j - j0
  std::vector<std::size_t> zeroed_per_level;
  double min_factor = 1.0;
  double mean_factor = 1.0;
  double max_factor = 0.0;
};

struct ShrinkResult {
  CoefficientPyramid pyramid;
  ShrinkageDiagnostics diagnostics;
};

/// (1 - lambda* L_b h^{-2}(0) / (4 n S^2))_+ for a block of cardinality L_b and
/// energy S^2; 0 when S^2 == 0.
double shrinkage_factor(double energy, std::size_t block_cardinality, const ShrinkageConfig& config);

/// Applies the block rule to every detail coefficient; the gross block is
/// copied unchanged.
ShrinkResult shrink(const CoefficientPyramid& pyramid, const BlockPartition& partition,
                    const ShrinkageConfig& config);

}  // namespace rplm
