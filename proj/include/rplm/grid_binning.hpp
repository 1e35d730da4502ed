#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rplm {

/// Sizes of the dyadic binning scheme for an equispaced grid of
/// `points_per_axis`^q design points.
struct GridDesign {
  int q = 0;
  std::size_t points_per_axis = 0;  // m + 1
  std::size_t n = 0;                // (m + 1)^q
  int resolution = 0;               // J = floor(log2(n^{3/4}) / q)
  std::size_t bins_per_axis = 0;    // T = 2^J
  std::size_t total_bins = 0;       // V = T^q
  std::size_t kappa = 0;            // floor(n / V)
  std::size_t nu = 0;               // floor(n / (V 2^q))

  /// Grid spacing denominator m.
  std::size_t m() const noexcept { return points_per_axis - 1; }
  /// Per-axis count of the lower half of each axis interval, floor((m+1)/(2T)).
  std::size_t half_width() const noexcept { return points_per_axis / (2 * bins_per_axis); }

  friend bool operator==(const GridDesign&, const GridDesign&) = default;
};

/// Throws NonGridSampleSize when n is not a perfect q-th power (or m < 1) and
/// DegenerateBinning when there are more bins than grid points per axis.
GridDesign plan_grid(std::size_t n, int q);

/// Largest J with 2^{Jq} <= n^{3/4}, evaluated exactly in integers.
int resolution_exponent(std::size_t n, int q);

/// Observations grouped by bin. Bins are indexed by their flat lexicographic
/// (0-based) multi-index; within a bin, entries follow grid order, so the
/// contents do not depend on the order of the input rows.
struct BinnedData {
  GridDesign design;
  std::vector<std::vector<double>> bins;
  std::vector<std::vector<double>> halfbins;
  std::vector<std::vector<std::size_t>> bin_rows;  // input row of each entry in `bins`
  std::vector<std::vector<std::size_t>> halfbin_rows;
};

/// `u` is row-major n x q with coordinates in {0, 1/m, ..., 1}.
BinnedData bin_observations(std::span<const double> u, std::span<const double> y,
                            const GridDesign& design);

/// 0-based axis bin of grid index i in {0..m}: i/m in ((l-1)/T, l/T] -> l-1,
/// and the coordinate 0 goes to the first bin.
std::size_t axis_bin(std::size_t i, const GridDesign& design);

/// Flat index of the bin containing an arbitrary point of [0,1]^q under the
/// same half-open interval rule.
std::size_t locate_bin(std::span<const double> point, const GridDesign& design);

/// Equispaced grid coordinates in lexicographic order, row-major n x q.
std::vector<double> grid_coordinates(const GridDesign& design);

}  // namespace rplm
