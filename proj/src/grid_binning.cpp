#include "rplm/grid_binning.hpp"

#include <cmath>
#include <string>

#include "rplm/error.hpp"
#include "rplm/tensor.hpp"

namespace rplm {
namespace {

__extension__ using u128 = unsigned __int128;

constexpr double kGridTolerance = 1e-9;

// Exact integer q-th root, or 0 when n is not a perfect power.
std::size_t exact_root(std::size_t n, int q) {
  auto guess = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 1.0 / q)));
  for (std::size_t r = (guess > 0 ? guess - 1 : 0); r <= guess + 1; ++r) {
    u128 p = 1;
    for (int k = 0; k < q && p <= n; ++k) p *= r;
    if (p == n) return r;
  }
  return 0;
}

}  // namespace

int resolution_exponent(std::size_t n, int q) {
  if (n > 5'000'000'000'000ULL) throw Error(ErrorCode::kInvalidArgument, "sample size too large");
  // 2^{Jq} <= n^{3/4}  <=>  2^{4Jq} <= n^3
  const u128 cube = static_cast<u128>(n) * n * n;
  int J = 0;
  while (4 * (J + 1) * q < 128 && (static_cast<u128>(1) << (4 * (J + 1) * q)) <= cube) ++J;
  return J;
}

GridDesign plan_grid(std::size_t n, int q) {
  if (q < 1) throw Error(ErrorCode::kInvalidArgument, "dimension q must be positive");
  const std::size_t root = exact_root(n, q);
  if (root < 2) {
    throw Error(ErrorCode::kNonGridSampleSize,
                "n=" + std::to_string(n) + " is not (m+1)^q with m >= 1 for q=" + std::to_string(q));
  }
  GridDesign d;
  d.q = q;
  d.points_per_axis = root;
  d.n = n;
  d.resolution = resolution_exponent(n, q);
  d.bins_per_axis = std::size_t{1} << d.resolution;
  if (d.bins_per_axis > root) {
    throw Error(ErrorCode::kDegenerateBinning, "T=" + std::to_string(d.bins_per_axis) +
                                                   " bins per axis exceed m+1=" + std::to_string(root));
  }
  d.total_bins = ipow(d.bins_per_axis, q);
  d.kappa = n / d.total_bins;
  d.nu = n / (d.total_bins * ipow(2, q));
  return d;
}

std::size_t axis_bin(std::size_t i, const GridDesign& design) {
  if (i == 0) return 0;
  const std::size_t m = design.m();
  const std::size_t T = design.bins_per_axis;
  return (i * T + m - 1) / m - 1;  // ceil(i T / m) - 1
}

std::size_t locate_bin(std::span<const double> point, const GridDesign& design) {
  if (point.size() != static_cast<std::size_t>(design.q)) {
    throw Error(ErrorCode::kShapeMismatch, "point dimension differs from q");
  }
  const auto T = static_cast<double>(design.bins_per_axis);
  std::size_t flat = 0;
  for (double c : point) {
    if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "point outside [0,1]^q");
    auto l = static_cast<std::size_t>(std::ceil(c * T));
    l = (l == 0 ? 0 : l - 1);
    flat = flat * design.bins_per_axis + l;
  }
  return flat;
}

std::vector<double> grid_coordinates(const GridDesign& design) {
  const auto q = static_cast<std::size_t>(design.q);
  std::vector<double> u(design.n * q);
  const auto m = static_cast<double>(design.m());
  std::vector<std::size_t> idx(q, 0);
  for (std::size_t row = 0; row < design.n; ++row) {
    for (std::size_t s = 0; s < q; ++s) u[row * q + s] = static_cast<double>(idx[s]) / m;
    for (std::size_t s = q; s-- > 0;) {
      if (++idx[s] < design.points_per_axis) break;
      idx[s] = 0;
    }
  }
  return u;
}

BinnedData bin_observations(std::span<const double> u, std::span<const double> y,
                            const GridDesign& design) {
  const auto q = static_cast<std::size_t>(design.q);
  const std::size_t n = design.n;
  if (y.size() != n || u.size() != n * q) {
    throw Error(ErrorCode::kShapeMismatch, "expected " + std::to_string(n) + " observations of dimension " +
                                               std::to_string(q));
  }
  const std::size_t m = design.m();
  const std::size_t side = design.points_per_axis;

  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> row_of_point(n, kUnseen);
  for (std::size_t row = 0; row < n; ++row) {
    std::size_t flat = 0;
    for (std::size_t s = 0; s < q; ++s) {
      const double c = u[row * q + s];
      const double scaled = c * static_cast<double>(m);
      const long long i = std::llround(scaled);
      if (!std::isfinite(c) || i < 0 || static_cast<std::size_t>(i) > m ||
          std::abs(c - static_cast<double>(i) / static_cast<double>(m)) > kGridTolerance) {
        throw Error(ErrorCode::kOffGridPoint,
                    "row " + std::to_string(row) + " axis " + std::to_string(s + 1) + " value " + std::to_string(c));
      }
      flat = flat * side + static_cast<std::size_t>(i);
    }
    if (row_of_point[flat] != kUnseen) {
      throw Error(ErrorCode::kIncompleteGrid, "grid point of row " + std::to_string(row) +
                                                  " duplicates row " + std::to_string(row_of_point[flat]));
    }
    row_of_point[flat] = row;
  }
  // n distinct grid points out of n possible: the grid is complete.

  // Per-axis lookup tables.
  const std::size_t half = design.half_width();
  std::vector<std::size_t> bin_of(side);
  std::vector<bool> in_half(side);
  {
    std::vector<std::size_t> rank_in_bin(design.bins_per_axis, 0);
    for (std::size_t i = 0; i < side; ++i) {
      bin_of[i] = axis_bin(i, design);
      in_half[i] = rank_in_bin[bin_of[i]]++ < half;
    }
  }

  BinnedData out;
  out.design = design;
  out.bins.resize(design.total_bins);
  out.halfbins.resize(design.total_bins);
  out.bin_rows.resize(design.total_bins);
  out.halfbin_rows.resize(design.total_bins);

  std::vector<std::size_t> idx(q, 0);
  for (std::size_t point = 0; point < n; ++point) {
    std::size_t bin = 0;
    bool lower = true;
    for (std::size_t s = 0; s < q; ++s) {
      bin = bin * design.bins_per_axis + bin_of[idx[s]];
      lower = lower && in_half[idx[s]];
    }
    const std::size_t row = row_of_point[point];
    out.bins[bin].push_back(y[row]);
    out.bin_rows[bin].push_back(row);
    if (lower) {
      out.halfbins[bin].push_back(y[row]);
      out.halfbin_rows[bin].push_back(row);
    }
    for (std::size_t s = q; s-- > 0;) {
      if (++idx[s] < side) break;
      idx[s] = 0;
    }
  }
  return out;
}

}  // namespace rplm
