#include "rplm/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rplm/error.hpp"

namespace rplm {
namespace {

// Daubechies (1992), Table 6.1, extremal-phase coefficients, unit l2 norm.
constexpr double kDb4[] = {
    0.230377813308896501,  0.714846570552915647, 0.630880767929858908,  -0.027983769416859854,
    -0.187034811719093084, 0.030841381835560764, 0.032883011666885200, -0.010597401785069032,
};

std::vector<double> quadrature_mirror(const std::vector<double>& h) {
  const std::size_t K = h.size();
  std::vector<double> g(K);
  for (std::size_t k = 0; k < K; ++k) g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[K - 1 - k];
  return g;
}

void verify_filter(const WaveletFilter& f) {
  const auto& h = f.scaling;
  const std::size_t K = h.size();
  double sum = 0.0;
  for (double v : h) sum += v;
  if (std::abs(sum - std::numbers::sqrt2) > 1e-12) {
    throw Error(ErrorCode::kUnknownFilter, f.name + ": taps do not sum to sqrt(2)");
  }
  for (std::size_t shift = 0; 2 * shift < K; ++shift) {
    double dot = 0.0;
    for (std::size_t k = 0; k + 2 * shift < K; ++k) dot += h[k] * h[k + 2 * shift];
    const double want = shift == 0 ? 1.0 : 0.0;
    if (std::abs(dot - want) > 1e-12) {
      throw Error(ErrorCode::kUnknownFilter, f.name + ": taps are not orthonormal");
    }
  }
  for (int p = 0; p < f.vanishing_moments; ++p) {
    double moment = 0.0;
    for (std::size_t k = 0; k < K; ++k) moment += std::pow(static_cast<double>(k), p) * f.wavelet[k];
    if (std::abs(moment) > 1e-10) {
      throw Error(ErrorCode::kUnknownFilter, f.name + ": moment " + std::to_string(p) + " does not vanish");
    }
  }
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

int log2_exact(std::size_t v) {
  int j = 0;
  while ((std::size_t{1} << j) < v) ++j;
  return j;
}

// Gather/scatter a line of `tensor` along `axis` starting at flat offset `base`.
void apply_along_axis(CubeTensor& tensor, int axis, const WaveletFilter& filter, bool inverse) {
  const std::size_t N = tensor.side();
  const std::size_t half = N / 2;
  const std::size_t stride = tensor.stride(axis);
  std::vector<double> line(N), out(N);
  for (std::size_t base = 0; base < tensor.size(); ++base) {
    if ((base / stride) % N != 0) continue;
    for (std::size_t k = 0; k < N; ++k) line[k] = tensor[base + k * stride];
    if (inverse) {
      synthesis_step(std::span<const double>(line).first(half), std::span<const double>(line).subspan(half),
                     filter, out);
    } else {
      analysis_step(line, filter, std::span<double>(out).first(half), std::span<double>(out).subspan(half));
    }
    for (std::size_t k = 0; k < N; ++k) tensor[base + k * stride] = out[k];
  }
}

// Copies between a side-N cube laid out as 2^q quadrants and a side-N/2 sub-cube.
void copy_quadrant(const CubeTensor& from, CubeTensor& to, int pattern, bool into_quadrant) {
  const int q = to.dims();
  const std::size_t small = into_quadrant ? from.side() : to.side();
  const std::size_t offset_unit = small;
  std::vector<std::size_t> idx(static_cast<std::size_t>(q)), big(static_cast<std::size_t>(q));
  const std::size_t count = ipow(small, q);
  for (std::size_t f = 0; f < count; ++f) {
    std::size_t rem = f;
    for (int s = q - 1; s >= 0; --s) {
      idx[s] = rem % small;
      rem /= small;
    }
    for (int s = 0; s < q; ++s) big[s] = idx[s] + (((pattern >> s) & 1) ? offset_unit : 0);
    if (into_quadrant) {
      to.at(big) = from[f];
    } else {
      to[f] = from.at(big);
    }
  }
}

}  // namespace

std::vector<std::string> filter_names() { return {"haar", "db2", "db4"}; }

WaveletFilter build_filter(const std::string& name) {
  WaveletFilter f;
  f.name = name;
  if (name == "haar" || name == "db1") {
    f.scaling = {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
    f.vanishing_moments = 1;
  } else if (name == "db2") {
    const double s3 = std::sqrt(3.0);
    const double d = 4.0 * std::numbers::sqrt2;
    f.scaling = {(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d};
    f.vanishing_moments = 2;
  } else if (name == "db4") {
    f.scaling.assign(std::begin(kDb4), std::end(kDb4));
    f.vanishing_moments = 4;
  } else {
    throw Error(ErrorCode::kUnknownFilter, "'" + name + "' (known: haar, db2, db4)");
  }
  f.wavelet = quadrature_mirror(f.scaling);
  verify_filter(f);
  return f;
}

int default_primary_level(const WaveletFilter& filter) { return log2_exact(filter.taps()); }

std::size_t CoefficientPyramid::coefficient_count() const {
  std::size_t c = gross.size();
  for (const auto& level : details) {
    for (const auto& band : level) c += band.size();
  }
  return c;
}

double CoefficientPyramid::energy() const {
  double e = 0.0;
  for (double v : flatten()) e += v * v;
  return e;
}

std::vector<double> CoefficientPyramid::flatten() const {
  std::vector<double> out(gross.values().begin(), gross.values().end());
  for (const auto& level : details) {
    for (const auto& band : level) out.insert(out.end(), band.values().begin(), band.values().end());
  }
  return out;
}

CoefficientPyramid CoefficientPyramid::zeros_like() const {
  CoefficientPyramid z = *this;
  std::fill(z.gross.values().begin(), z.gross.values().end(), 0.0);
  for (auto& level : z.details) {
    for (auto& band : level) std::fill(band.values().begin(), band.values().end(), 0.0);
  }
  return z;
}

void analysis_step(std::span<const double> line, const WaveletFilter& filter, std::span<double> approx,
                   std::span<double> detail) {
  const std::size_t N = line.size();
  const std::size_t K = filter.taps();
  for (std::size_t k = 0; k < N / 2; ++k) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t m = 0; m < K; ++m) {
      const double x = line[(2 * k + m) % N];
      a += filter.scaling[m] * x;
      d += filter.wavelet[m] * x;
    }
    approx[k] = a;
    detail[k] = d;
  }
}

void synthesis_step(std::span<const double> approx, std::span<const double> detail, const WaveletFilter& filter,
                    std::span<double> line) {
  const std::size_t N = line.size();
  const std::size_t K = filter.taps();
  std::fill(line.begin(), line.end(), 0.0);
  for (std::size_t k = 0; k < N / 2; ++k) {
    for (std::size_t m = 0; m < K; ++m) {
      line[(2 * k + m) % N] += filter.scaling[m] * approx[k] + filter.wavelet[m] * detail[k];
    }
  }
}

CoefficientPyramid dwt_qd(const CubeTensor& tensor, const WaveletFilter& filter, int j0) {
  if (tensor.dims() < 1 || !is_power_of_two(tensor.side())) {
    throw Error(ErrorCode::kBadShape, "axis length must be a power of two");
  }
  const int q = tensor.dims();
  const int J = log2_exact(tensor.side());
  if (j0 < 0 || j0 > J) {
    throw Error(ErrorCode::kBadPrimaryLevel, "j0=" + std::to_string(j0) + " outside [0, " + std::to_string(J) + "]");
  }
  CoefficientPyramid p;
  p.q = q;
  p.j0 = j0;
  p.J = J;
  p.details.resize(static_cast<std::size_t>(J - j0));

  CubeTensor cur = tensor;
  for (int j = J - 1; j >= j0; --j) {
    for (int axis = 0; axis < q; ++axis) apply_along_axis(cur, axis, filter, /*inverse=*/false);
    const std::size_t half = cur.side() / 2;
    auto& level = p.details[static_cast<std::size_t>(j - j0)];
    level.reserve(static_cast<std::size_t>((1 << q) - 1));
    for (int i = 1; i < (1 << q); ++i) {
      CubeTensor band(q, half);
      copy_quadrant(cur, band, i, /*into_quadrant=*/false);
      level.push_back(std::move(band));
    }
    CubeTensor approx(q, half);
    copy_quadrant(cur, approx, 0, false);
    cur = std::move(approx);
  }
  p.gross = std::move(cur);
  return p;
}

CoefficientPyramid dwt_1d_periodized(std::span<const double> signal, const WaveletFilter& filter, int j0) {
  if (!is_power_of_two(signal.size())) throw Error(ErrorCode::kBadLength, "length must be a power of two");
  if (j0 < 0 || (std::size_t{1} << j0) > signal.size()) {
    throw Error(ErrorCode::kBadPrimaryLevel, "2^j0 exceeds the signal length");
  }
  CubeTensor t(1, signal.size());
  std::copy(signal.begin(), signal.end(), t.values().begin());
  return dwt_qd(t, filter, j0);
}

CubeTensor idwt_qd(const CoefficientPyramid& p, const WaveletFilter& filter) {
  const int q = p.q;
  if (q < 1 || p.j0 < 0 || p.J < p.j0 || p.details.size() != static_cast<std::size_t>(p.J - p.j0) ||
      p.gross.dims() != q || p.gross.side() != (std::size_t{1} << p.j0)) {
    throw Error(ErrorCode::kBadShape, "inconsistent pyramid");
  }
  CubeTensor cur = p.gross;
  for (int j = p.j0; j < p.J; ++j) {
    const auto& level = p.details[static_cast<std::size_t>(j - p.j0)];
    const std::size_t half = std::size_t{1} << j;
    if (level.size() != static_cast<std::size_t>((1 << q) - 1)) throw Error(ErrorCode::kBadShape, "subband count");
    CubeTensor big(q, 2 * half);
    copy_quadrant(cur, big, 0, /*into_quadrant=*/true);
    for (int i = 1; i < (1 << q); ++i) {
      const CubeTensor& band = level[static_cast<std::size_t>(i - 1)];
      if (band.dims() != q || band.side() != half) throw Error(ErrorCode::kBadShape, "subband shape");
      copy_quadrant(band, big, i, true);
    }
    for (int axis = 0; axis < q; ++axis) apply_along_axis(big, axis, filter, /*inverse=*/true);
    cur = std::move(big);
  }
  return cur;
}

namespace {

double lp_accumulate(double acc, double v, double s) {
  if (std::isinf(s)) return std::max(acc, std::abs(v));
  return acc + std::pow(std::abs(v), s);
}

double lp_finish(double acc, double s) { return std::isinf(s) ? acc : std::pow(acc, 1.0 / s); }

}  // namespace

double besov_sequence_norm(const CoefficientPyramid& p, double alpha, double s, double t) {
  if (!(s >= 1.0) || !(t >= 1.0)) throw Error(ErrorCode::kBadExponent, "s and t must be >= 1");
  const double inv_s = std::isinf(s) ? 0.0 : 1.0 / s;
  const double w = alpha + p.q * (0.5 - inv_s);
  if (!(w > 0.0)) throw Error(ErrorCode::kBadExponent, "w = alpha + q(1/2 - 1/s) must be positive");

  double gross = 0.0;
  for (double v : p.gross.values()) gross = lp_accumulate(gross, v, s);
  gross = lp_finish(gross, s);

  double fine = 0.0;
  for (int j = p.j0; j < p.J; ++j) {
    double level = 0.0;
    for (const auto& band : p.details[static_cast<std::size_t>(j - p.j0)]) {
      for (double v : band.values()) level = lp_accumulate(level, v, s);
    }
    const double term = std::exp2(j * w) * lp_finish(level, s);
    fine = std::isinf(t) ? std::max(fine, term) : fine + std::pow(term, t);
  }
  if (!std::isinf(t)) fine = std::pow(fine, 1.0 / t);
  return gross + fine;
}

}  // namespace rplm
