#include "rplm/tensor.hpp"

#include "rplm/error.hpp"

namespace rplm {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

CubeTensor::CubeTensor(int dims, std::size_t side, double fill)
    : dims_(dims), side_(side) {
  if (dims < 1) throw Error(ErrorCode::kBadShape, "tensor needs at least one axis");
  data_.assign(ipow(side, dims), fill);
}

std::size_t CubeTensor::flat_index(std::span<const std::size_t> index) const {
  std::size_t flat = 0;
  for (int s = 0; s < dims_; ++s) flat = flat * side_ + index[s];
  return flat;
}

void CubeTensor::unflatten(std::size_t flat, std::span<std::size_t> index) const {
  for (int s = dims_ - 1; s >= 0; --s) {
    index[s] = flat % side_;
    flat /= side_;
  }
}

std::size_t CubeTensor::stride(int axis) const { return ipow(side_, dims_ - 1 - axis); }

double& CubeTensor::at(std::span<const std::size_t> index) { return data_[flat_index(index)]; }
double CubeTensor::at(std::span<const std::size_t> index) const {
  return data_[flat_index(index)];
}

}  // namespace rplm
