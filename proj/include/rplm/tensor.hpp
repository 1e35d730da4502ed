#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rplm {

/// Dense hypercube tensor: `dims` axes of equal length `side`, stored
/// row-major (axis 0 varies slowest), i.e. lexicographic in the multi-index.
class CubeTensor {
 public:
  CubeTensor() = default;
  CubeTensor(int dims, std::size_t side, double fill = 0.0);

  int dims() const noexcept { return dims_; }
  std::size_t side() const noexcept { return side_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  double& at(std::span<const std::size_t> index);
  double at(std::span<const std::size_t> index) const;

  std::size_t flat_index(std::span<const std::size_t> index) const;
  /// Inverse of flat_index; writes `dims()` entries into `index`.
  void unflatten(std::size_t flat, std::span<std::size_t> index) const;
  /// Distance in the flat array between neighbours along `axis`.
  std::size_t stride(int axis) const;

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool same_shape(const CubeTensor& other) const noexcept {
    return dims_ == other.dims_ && side_ == other.side_;
  }

  friend bool operator==(const CubeTensor&, const CubeTensor&) = default;

 private:
  int dims_ = 0;
  std::size_t side_ = 0;
  std::vector<double> data_;
};

/// side^dims without overflow checks; callers keep sizes at desk scale.
std::size_t ipow(std::size_t base, int exp);

}  // namespace rplm
