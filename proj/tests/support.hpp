// Independent reference implementations and generators shared by the tests.
// Nothing here calls into the library's transform or median code.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rplm/tensor.hpp"
#include "rplm/wavelet.hpp"

namespace oracle {

inline double sorted_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

// Periodized one-level analysis matrix of size N x N: the first N/2 rows give
// approximation coefficients, the last N/2 rows give details.
inline Eigen::MatrixXd level_matrix(const std::vector<double>& h, std::size_t N) {
  const std::size_t K = h.size();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t k = 0; k < N / 2; ++k) {
    for (std::size_t m = 0; m < K; ++m) {
      const auto col = static_cast<Eigen::Index>((2 * k + m) % N);
      const double g = ((m % 2) ? -1.0 : 1.0) * h[K - 1 - m];
      W(static_cast<Eigen::Index>(k), col) += h[m];
      W(static_cast<Eigen::Index>(N / 2 + k), col) += g;
    }
  }
  return W;
}

// Straight-line q-D pyramid in Mallat layout: at each level the current
// corner block of side N is replaced by kron(W_N, ..., W_N) applied to it.
inline std::vector<double> mallat_transform(const std::vector<double>& x, int q, std::size_t T,
                                            const std::vector<double>& h, int j0) {
  std::vector<double> out = x;
  std::vector<std::size_t> idx(static_cast<std::size_t>(q));
  auto flat = [&](const std::vector<std::size_t>& ix) {
    std::size_t f = 0;
    for (int s = 0; s < q; ++s) f = f * T + ix[static_cast<std::size_t>(s)];
    return f;
  };
  for (std::size_t N = T; N > (std::size_t{1} << j0); N /= 2) {
    const Eigen::MatrixXd W = level_matrix(h, N);
    for (int axis = 0; axis < q; ++axis) {
      // every line of the corner block along `axis`
      std::size_t lines = 1;
      for (int s = 0; s < q - 1; ++s) lines *= N;
      for (std::size_t l = 0; l < lines; ++l) {
        std::size_t rem = l;
        for (int s = q - 1; s >= 0; --s) {
          if (s == axis) continue;
          idx[static_cast<std::size_t>(s)] = rem % N;
          rem /= N;
        }
        Eigen::VectorXd line(static_cast<Eigen::Index>(N));
        for (std::size_t t = 0; t < N; ++t) {
          idx[static_cast<std::size_t>(axis)] = t;
          line(static_cast<Eigen::Index>(t)) = out[flat(idx)];
        }
        const Eigen::VectorXd res = W * line;
        for (std::size_t t = 0; t < N; ++t) {
          idx[static_cast<std::size_t>(axis)] = t;
          out[flat(idx)] = res(static_cast<Eigen::Index>(t));
        }
      }
    }
  }
  return out;
}

// Reads the pyramid out of the Mallat layout in the order used by
// CoefficientPyramid::flatten (gross, then levels, then subbands).
inline std::vector<double> mallat_to_pyramid_order(const std::vector<double>& m, int q, std::size_t T, int j0,
                                                   int J) {
  std::vector<double> out;
  out.reserve(m.size());
  auto emit_box = [&](std::size_t side, unsigned pattern) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(q), 0);
    std::size_t count = 1;
    for (int s = 0; s < q; ++s) count *= side;
    for (std::size_t c = 0; c < count; ++c) {
      std::size_t rem = c;
      for (int s = q - 1; s >= 0; --s) {
        idx[static_cast<std::size_t>(s)] = rem % side;
        rem /= side;
      }
      std::size_t f = 0;
      for (int s = 0; s < q; ++s) {
        const std::size_t off = ((pattern >> s) & 1u) ? side : 0;
        f = f * T + idx[static_cast<std::size_t>(s)] + off;
      }
      out.push_back(m[f]);
    }
  };
  emit_box(std::size_t{1} << j0, 0);
  for (int j = j0; j < J; ++j) {
    for (unsigned i = 1; i < (1u << q); ++i) emit_box(std::size_t{1} << j, i);
  }
  return out;
}

// Full orthogonal matrix of the q-D transform, built column by column from
// standard basis vectors; rows follow pyramid order.
inline Eigen::MatrixXd transform_matrix(int q, std::size_t T, const std::vector<double>& h, int j0) {
  std::size_t size = 1;
  for (int s = 0; s < q; ++s) size *= T;
  int J = 0;
  while ((std::size_t{1} << J) < T) ++J;
  Eigen::MatrixXd M(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  for (std::size_t c = 0; c < size; ++c) {
    std::vector<double> e(size, 0.0);
    e[c] = 1.0;
    const auto col = mallat_to_pyramid_order(mallat_transform(e, q, T, h, j0), q, T, j0, J);
    for (std::size_t r = 0; r < size; ++r) M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
  }
  return M;
}

inline rplm::CubeTensor random_tensor(int q, std::size_t T, std::mt19937_64& rng) {
  rplm::CubeTensor t(q, T);
  std::normal_distribution<double> z;
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = z(rng);
  return t;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
