#include "rplm/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <numeric>

#include "rplm/error.hpp"

namespace rplm {
namespace {

// Step profile for the blocks function (jump locations and heights).
constexpr double kJumps[] = {0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81};
constexpr double kHeights[] = {0.8, -1.0, 0.6, -0.8, 1.0, -0.84, 0.42, 0.86, -0.62, 0.42, -0.84};

double step_profile(double t) {
  double s = 0.0;
  for (std::size_t k = 0; k < std::size(kJumps); ++k) {
    const double d = t - kJumps[k];
    s += kHeights[k] * (d > 0.0 ? 1.0 : (d < 0.0 ? 0.0 : 0.5));
  }
  return s;
}

double blocks_profile(double t) { return step_profile(t) - step_profile(1.0 - t); }

enum Stream : std::uint64_t { kDataStream = 1, kCouplingStream = 2 };

std::uint64_t fnv1a(std::span<const double> values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : values) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

double quadratic_form(const std::vector<double>& beta, const std::vector<double>& cov) {
  const std::size_t p = beta.size();
  if (cov.empty()) return std::inner_product(beta.begin(), beta.end(), beta.begin(), 0.0);
  double s = 0.0;
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) s += beta[r] * cov[r * p + c] * beta[c];
  }
  return s;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& v) {
  MeanSe out;
  const auto k = static_cast<double>(v.size());
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / k;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (k - 1.0) / k);
  }
  return out;
}

}  // namespace

double TestFunction::operator()(std::span<const double> u) const {
  switch (kind) {
    case TestFunctionKind::kSine: {
      double v = 1.0;
      for (double c : u) v *= std::sin(2.0 * std::numbers::pi * c);
      return v;
    }
    case TestFunctionKind::kBlocks: {
      double v = 1.0;
      for (double c : u) v *= blocks_profile(c);
      return v;
    }
    case TestFunctionKind::kZero:
      return 0.0;
  }
  return 0.0;
}

std::string TestFunction::name() const {
  switch (kind) {
    case TestFunctionKind::kSine: return "sine";
    case TestFunctionKind::kBlocks: return "blocks";
    case TestFunctionKind::kZero: return "zero";
  }
  return "?";
}

double TestFunction::nominal_alpha() const {
  switch (kind) {
    case TestFunctionKind::kSine: return 2.0;
    case TestFunctionKind::kBlocks: return 0.5;
    case TestFunctionKind::kZero: return 10.0;
  }
  return 0.0;
}

TestFunction parse_test_function(const std::string& name) {
  if (name == "sine") return {TestFunctionKind::kSine};
  if (name == "blocks") return {TestFunctionKind::kBlocks};
  if (name == "zero") return {TestFunctionKind::kZero};
  throw Error(ErrorCode::kBadValue, "unknown test function '" + name + "' (known: sine, blocks, zero)");
}

EstimatorConfig SimulationConfig::estimator_config() const {
  EstimatorConfig ec;
  ec.filter_name = wavelet;
  ec.j0 = j0;
  ec.block_cardinality = block_cardinality;
  if (noise_mode == NoiseMode::kKnownValue) ec.known_h_inv_sq = noise_value;
  if (noise_mode == NoiseMode::kKnownAnalytic) ec.known_h_inv_sq = analytic_h_inv_sq(*this);
  return ec;
}

void validate(const SimulationConfig& c) {
  if (c.q < 1) throw Error(ErrorCode::kBadValue, "q must be >= 1");
  if (c.replications < 1) throw Error(ErrorCode::kBadValue, "replications must be >= 1");
  if (c.sample_sizes.empty()) throw Error(ErrorCode::kBadValue, "sample_sizes must not be empty");
  for (std::size_t n : c.sample_sizes) {
    try {
      plan_grid(n, c.q);
    } catch (const Error& e) {
      throw Error(ErrorCode::kBadValue, std::string("sample_sizes: ") + e.what());
    }
  }
  if (!c.design.covariance.empty() && c.design.covariance.size() != c.p() * c.p()) {
    throw Error(ErrorCode::kBadValue, "design covariance must be p x p with p = len(beta)");
  }
  if (c.design.kind != DesignKind::kNone && c.p() == 0) {
    throw Error(ErrorCode::kBadValue, "a design distribution needs a non-empty beta");
  }
  build_filter(c.wavelet);
  if (c.j0 && *c.j0 < 0) throw Error(ErrorCode::kBadValue, "j0 must be >= 0");
  if (c.block_cardinality && *c.block_cardinality < 1) throw Error(ErrorCode::kBadValue, "block_cardinality must be >= 1");
  if (c.noise_mode == NoiseMode::kKnownValue && !(c.noise_value > 0.0)) {
    throw Error(ErrorCode::kBadValue, "noise_mode known value must be positive");
  }
  if (c.u0) {
    if (c.u0->size() != static_cast<std::size_t>(c.q)) throw Error(ErrorCode::kBadValue, "u0 must have q coordinates");
    for (double v : *c.u0) {
      if (!(v > 0.0 && v < 1.0)) throw Error(ErrorCode::kBadValue, "u0 must lie in the open unit cube");
    }
  }
}

double analytic_h_inv_sq(const SimulationConfig& c) {
  const double spread = c.design.kind == DesignKind::kNone ? 0.0 : quadratic_form(c.beta, c.design.covariance);
  double h0 = 0.0;
  if (spread == 0.0) {
    h0 = density_at_median(c.error);
  } else if (c.design.kind == DesignKind::kGaussian && c.error.kind == ErrorKind::kGaussian) {
    h0 = density_at_median({ErrorKind::kGaussian, std::sqrt(c.error.param * c.error.param + spread)});
  } else if (c.design.kind == DesignKind::kCauchy && c.error.kind == ErrorKind::kCauchy) {
    h0 = density_at_median({ErrorKind::kCauchy, c.error.param + std::sqrt(spread)});
  } else {
    throw Error(ErrorCode::kUnknownDensityValue, "no closed form for h(0) of X'beta + xi with " +
                                                     to_string(c.design) + " and " + to_string(c.error));
  }
  return 1.0 / (h0 * h0);
}

Dataset generate_dataset(const SimulationConfig& config, std::size_t n, Rng& rng) {
  Dataset ds;
  ds.design = plan_grid(n, config.q);
  ds.u = grid_coordinates(ds.design);
  const auto q = static_cast<std::size_t>(config.q);
  const std::size_t p = config.p();

  ds.f_sample.resize(n);
  for (std::size_t i = 0; i < n; ++i) ds.f_sample[i] = config.test_function(std::span(ds.u).subspan(i * q, q));

  const std::vector<double> x = sample_elliptical(config.design, p, n, rng);
  ds.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lin = 0.0;
    for (std::size_t k = 0; k < p; ++k) lin += x[i * p + k] * config.beta[k];
    ds.y[i] = ds.f_sample[i] + lin;
  }
  for (std::size_t i = 0; i < n; ++i) ds.y[i] += sample_error(config.error, rng);

  ds.f_nodes = CubeTensor(config.q, ds.design.bins_per_axis);
  std::vector<std::size_t> idx(q);
  std::vector<double> node(q);
  const auto T = static_cast<double>(ds.design.bins_per_axis);
  for (std::size_t f = 0; f < ds.f_nodes.size(); ++f) {
    ds.f_nodes.unflatten(f, idx);
    for (std::size_t s = 0; s < q; ++s) node[s] = static_cast<double>(idx[s] + 1) / T;
    ds.f_nodes[f] = config.test_function(node);
  }
  return ds;
}

double mise(const CubeTensor& f_hat, const CubeTensor& f_true) {
  if (!f_hat.same_shape(f_true) || f_hat.size() == 0) throw Error(ErrorCode::kShapeMismatch, "MISE shapes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < f_hat.size(); ++i) {
    const double d = f_hat[i] - f_true[i];
    s += d * d;
  }
  return s / static_cast<double>(f_hat.size());
}

std::uint64_t replication_seed(const SimulationConfig& config, std::size_t n, std::size_t index) {
  return derive_stream_seed(config.seed, n, index, kDataStream);
}

ReplicationResult run_replication(const SimulationConfig& config, std::size_t n, std::size_t index) {
  Rng rng(replication_seed(config, n, index));
  const Dataset ds = generate_dataset(config, n, rng);
  const FitResult fr = fit(ds.u, ds.y, config.q, config.estimator_config());

  ReplicationResult out;
  out.mise = mise(fr.f_hat, ds.f_nodes);
  out.h_inv_sq = fr.noise.h_inv_sq;
  out.b_hat = fr.b_hat;
  out.data_checksum = fnv1a(ds.y);
  if (config.u0) {
    const std::size_t bin = locate_bin(*config.u0, ds.design);
    const double err = fr.f_hat[bin] - ds.f_nodes[bin];
    out.pointwise_sq_error = err * err;
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::kInvalidArgument, "slope needs >= 2 points");
  const auto k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<std::string> smoothness_warnings(double alpha, int q) {
  std::vector<std::string> w;
  if (!(alpha > q / 6.0)) w.push_back("nominal alpha <= q/6: local rate target does not apply");
  // Hoelder index of the embedding, taking s = 2.
  const double d = std::min(alpha - q / 2.0, 1.0);
  if (!(3.0 * d / (2.0 * q) > 2.0 * alpha / (2.0 * alpha + q))) {
    w.push_back("3d/(2q) <= 2 alpha/(2 alpha + q): binning error may dominate the target rate");
  }
  return w;
}

RateStudyReport rate_study(const SimulationConfig& config) {
  validate(config);
  if (config.sample_sizes.size() < 3) throw Error(ErrorCode::kBadValue, "rate study needs >= 3 sample sizes");
  if (config.replications < 10) throw Error(ErrorCode::kBadValue, "rate study needs >= 10 replications");

  RateStudyReport rep;
  rep.nominal_alpha = config.test_function.nominal_alpha();
  rep.target_slope = -2.0 * rep.nominal_alpha / (2.0 * rep.nominal_alpha + config.q);
  rep.warnings = smoothness_warnings(rep.nominal_alpha, config.q);

  std::vector<double> ns, mises, pointwise;
  for (std::size_t n : config.sample_sizes) {
    std::vector<double> m, pw, hs;
    for (std::size_t r = 0; r < config.replications; ++r) {
      const ReplicationResult rr = run_replication(config, n, r);
      if (!std::isfinite(rr.mise)) throw Error(ErrorCode::kBadValue, "non-finite MISE");
      m.push_back(rr.mise);
      hs.push_back(rr.h_inv_sq);
      if (rr.pointwise_sq_error) pw.push_back(*rr.pointwise_sq_error);
    }
    RateEntry e;
    e.n = n;
    const MeanSe ms = mean_and_se(m);
    e.mean_mise = ms.mean;
    e.se = ms.se;
    e.mean_h_inv_sq = mean_and_se(hs).mean;
    if (!pw.empty()) {
      const MeanSe p = mean_and_se(pw);
      e.pointwise_mean = p.mean;
      e.pointwise_se = p.se;
      pointwise.push_back(p.mean);
    }
    ns.push_back(static_cast<double>(n));
    mises.push_back(e.mean_mise);
    rep.entries.push_back(e);
  }
  rep.slope = loglog_slope(ns, mises);
  if (pointwise.size() == ns.size() &&
      std::all_of(pointwise.begin(), pointwise.end(), [](double v) { return v > 0.0; })) {
    rep.pointwise_slope = loglog_slope(ns, pointwise);
  }
  return rep;
}

CouplingResult coupling_check(const ErrorDistribution& error, std::size_t kappa, std::size_t repetitions,
                              std::uint64_t seed) {
  if (kappa % 2 == 0) throw Error(ErrorCode::kInvalidArgument, "kappa must be odd");
  if (repetitions < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two repetitions");
  const double h0 = density_at_median(error);
  const double scale = std::sqrt(4.0 * static_cast<double>(kappa)) * h0;
  Rng rng(derive_stream_seed(seed, kappa, repetitions, kCouplingStream));
  std::vector<double> draws(kappa), normalized(repetitions);
  for (std::size_t r = 0; r < repetitions; ++r) {
    for (double& d : draws) d = sample_error(error, rng);
    std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(kappa / 2), draws.end());
    normalized[r] = scale * draws[kappa / 2];
  }
  const MeanSe ms = mean_and_se(normalized);
  double ss = 0.0;
  for (double v : normalized) ss += (v - ms.mean) * (v - ms.mean);
  return {ss / static_cast<double>(repetitions - 1), 1.0, ms.mean, ms.se};
}

}  // namespace rplm
