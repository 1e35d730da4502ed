#include "rplm/distributions.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numbers>

#include "rplm/error.hpp"

namespace rplm {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Call {
  std::string name;
  std::string args;  // text between the outer parentheses, may be empty
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Call split_call(const std::string& raw) {
  const std::string text = trim(raw);
  const auto open = text.find('(');
  if (open == std::string::npos) return {text, {}};
  if (text.back() != ')') throw Error(ErrorCode::kBadValue, "unbalanced parentheses in '" + text + "'");
  return {trim(text.substr(0, open)), trim(text.substr(open + 1, text.size() - open - 2))};
}

double parse_number(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (trim(s.substr(used)).empty() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kBadValue, "bad number '" + s + "' in " + context);
}

std::vector<double> parse_matrix(const std::string& s) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(s);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kBadValue, "covariance must be a nested list, got '" + s + "'");
  }
  if (!j.is_array()) throw Error(ErrorCode::kBadValue, "covariance must be a nested list");
  const std::size_t p = j.size();
  std::vector<double> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != p) throw Error(ErrorCode::kBadCovariance, "covariance must be square");
    for (const auto& v : row) {
      if (!v.is_number()) throw Error(ErrorCode::kBadValue, "covariance entries must be numbers");
      out.push_back(v.get<double>());
    }
  }
  return out;
}

std::string matrix_text(const std::vector<double>& m) {
  const auto p = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m.size()))));
  std::string out = "[";
  for (std::size_t r = 0; r < p; ++r) {
    out += r ? ",[" : "[";
    for (std::size_t c = 0; c < p; ++c) out += (c ? "," : "") + format_number(m[r * p + c]);
    out += "]";
  }
  return out + "]";
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t stream) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ (b + 0x632be59bd9b4e019ULL));
  return splitmix64(h ^ (stream * 0xd1b54a32d192ed03ULL));
}

double sample_error(const ErrorDistribution& dist, Rng& rng) {
  switch (dist.kind) {
    case ErrorKind::kGaussian:
      return dist.param * std::normal_distribution<double>(0.0, 1.0)(rng);
    case ErrorKind::kCauchy:
      return dist.param * std::cauchy_distribution<double>(0.0, 1.0)(rng);
    case ErrorKind::kStudentT:
      return std::student_t_distribution<double>(dist.param)(rng);
    case ErrorKind::kLaplace: {
      const double e = std::exponential_distribution<double>(1.0)(rng);
      const bool negative = std::bernoulli_distribution(0.5)(rng);
      return dist.param * (negative ? -e : e);
    }
    case ErrorKind::kShiftedExponential:
      return std::exponential_distribution<double>(1.0)(rng) - std::numbers::ln2;
  }
  return 0.0;
}

double density_at_median(const ErrorDistribution& dist) {
  if (dist.kind != ErrorKind::kShiftedExponential && !(dist.param > 0.0)) {
    throw Error(ErrorCode::kUnknownDensityValue, to_string(dist) + " has no finite density at its median");
  }
  switch (dist.kind) {
    case ErrorKind::kGaussian:
      return 1.0 / (dist.param * std::sqrt(2.0 * std::numbers::pi));
    case ErrorKind::kCauchy:
      return 1.0 / (std::numbers::pi * dist.param);
    case ErrorKind::kStudentT: {
      const double nu = dist.param;
      return std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) / std::sqrt(nu * std::numbers::pi);
    }
    case ErrorKind::kLaplace:
      return 1.0 / (2.0 * dist.param);
    case ErrorKind::kShiftedExponential:
      return 0.5;
  }
  return 0.0;
}

bool is_symmetric(const ErrorDistribution& dist) { return dist.kind != ErrorKind::kShiftedExponential; }

std::string to_string(const ErrorDistribution& dist) {
  switch (dist.kind) {
    case ErrorKind::kGaussian: return "gaussian(" + format_number(dist.param) + ")";
    case ErrorKind::kCauchy: return "cauchy(" + format_number(dist.param) + ")";
    case ErrorKind::kStudentT: return "student_t(" + format_number(dist.param) + ")";
    case ErrorKind::kLaplace: return "laplace(" + format_number(dist.param) + ")";
    case ErrorKind::kShiftedExponential: return "shifted_exponential";
  }
  return "?";
}

ErrorDistribution parse_error_distribution(const std::string& text) {
  const Call call = split_call(text);
  ErrorDistribution d;
  const bool has_arg = !call.args.empty();
  if (call.name == "gaussian" || call.name == "normal") {
    d.kind = ErrorKind::kGaussian;
  } else if (call.name == "cauchy") {
    d.kind = ErrorKind::kCauchy;
  } else if (call.name == "laplace") {
    d.kind = ErrorKind::kLaplace;
  } else if (call.name == "student_t") {
    d.kind = ErrorKind::kStudentT;
    if (!has_arg) throw Error(ErrorCode::kBadValue, "student_t needs degrees of freedom");
  } else if (call.name == "shifted_exponential") {
    if (has_arg) throw Error(ErrorCode::kBadValue, "shifted_exponential takes no parameter");
    d.kind = ErrorKind::kShiftedExponential;
    d.param = 0.0;
    return d;
  } else {
    throw Error(ErrorCode::kBadValue, "unknown error distribution '" + call.name + "'");
  }
  if (has_arg) d.param = parse_number(call.args, "error distribution");
  if (d.param < 0.0 || (d.kind == ErrorKind::kStudentT && !(d.param > 0.0))) {
    throw Error(ErrorCode::kBadValue, "error distribution parameter must be positive");
  }
  return d;
}

std::vector<double> sample_elliptical(const DesignDistribution& dist, std::size_t p, std::size_t count, Rng& rng) {
  if (dist.kind == DesignKind::kNone || p == 0) return std::vector<double>(count * p, 0.0);
  Eigen::MatrixXd factor = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  if (!dist.covariance.empty()) {
    if (dist.covariance.size() != p * p) throw Error(ErrorCode::kBadCovariance, "covariance is not p x p");
    const auto P = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd sigma(P, P);
    for (Eigen::Index r = 0; r < P; ++r) {
      for (Eigen::Index c = 0; c < P; ++c) sigma(r, c) = dist.covariance[static_cast<std::size_t>(r * P + c)];
    }
    if (!sigma.isApprox(sigma.transpose(), 1e-12)) throw Error(ErrorCode::kBadCovariance, "covariance not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::kBadCovariance, "covariance not positive definite");
    factor = llt.matrixL();
  }
  double nu = 0.0;
  if (dist.kind == DesignKind::kStudentT) nu = dist.dof;
  if (dist.kind == DesignKind::kCauchy) nu = 1.0;
  if (dist.kind == DesignKind::kStudentT && !(nu > 0.0)) throw Error(ErrorCode::kBadValue, "student_t dof must be > 0");

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(count * p);
  Eigen::VectorXd z(static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < count; ++i) {
    for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = normal(rng);
    double mix = 1.0;
    if (nu > 0.0) {
      mix = 1.0 / std::sqrt(std::chi_squared_distribution<double>(nu)(rng) / nu);
    } else if (dist.kind == DesignKind::kLaplace) {
      mix = std::sqrt(std::exponential_distribution<double>(1.0)(rng));
    }
    const Eigen::VectorXd x = mix * (factor * z);
    for (std::size_t k = 0; k < p; ++k) out[i * p + k] = x(static_cast<Eigen::Index>(k));
  }
  return out;
}

std::string to_string(const DesignDistribution& dist) {
  std::string name;
  std::string args;
  switch (dist.kind) {
    case DesignKind::kNone: return "none";
    case DesignKind::kGaussian: name = "gaussian"; break;
    case DesignKind::kCauchy: name = "cauchy"; break;
    case DesignKind::kLaplace: name = "laplace"; break;
    case DesignKind::kStudentT: name = "student_t"; args = format_number(dist.dof); break;
  }
  if (!dist.covariance.empty()) args += (args.empty() ? "" : ", ") + matrix_text(dist.covariance);
  return args.empty() ? name : name + "(" + args + ")";
}

DesignDistribution parse_design_distribution(const std::string& text) {
  const Call call = split_call(text);
  DesignDistribution d;
  std::string rest = call.args;
  if (call.name == "none") {
    if (!rest.empty()) throw Error(ErrorCode::kBadValue, "design 'none' takes no parameters");
    return d;
  }
  if (call.name == "gaussian" || call.name == "normal") {
    d.kind = DesignKind::kGaussian;
  } else if (call.name == "cauchy") {
    d.kind = DesignKind::kCauchy;
  } else if (call.name == "laplace") {
    d.kind = DesignKind::kLaplace;
  } else if (call.name == "student_t") {
    d.kind = DesignKind::kStudentT;
    const auto comma = rest.find(',');
    d.dof = parse_number(rest.substr(0, comma), "design distribution");
    if (!(d.dof > 0.0)) throw Error(ErrorCode::kBadValue, "student_t dof must be > 0");
    rest = comma == std::string::npos ? std::string{} : trim(rest.substr(comma + 1));
  } else {
    throw Error(ErrorCode::kBadValue, "unknown design distribution '" + call.name + "'");
  }
  if (!rest.empty()) d.covariance = parse_matrix(rest);
  return d;
}

}  // namespace rplm
