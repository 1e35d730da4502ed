#include "rplm/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rplm/csv_io.hpp"
#include "rplm/error.hpp"

namespace rplm {
namespace {

const std::set<std::string> kKnownKeys = {"q",           "p",    "beta",       "design_dist", "error_dist",
                                          "test_function", "sample_sizes", "replications", "seed",
                                          "wavelet",     "j0",   "block_cardinality", "noise_mode", "u0"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::kBadValue, key + ": " + why);
}

long long parse_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    bad(key, "expected an integer, got '" + v + "'");
  }
  if (used != v.size()) bad(key, "expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  std::uint64_t out = 0;
  if (v.empty() || v.front() == '-') bad(key, "expected a non-negative integer, got '" + v + "'");
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    bad(key, "expected a non-negative integer, got '" + v + "'");
  }
  if (used != v.size()) bad(key, "expected a non-negative integer, got '" + v + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    bad(key, "expected a number, got '" + v + "'");
  }
  if (used != v.size()) bad(key, "expected a number, got '" + v + "'");
  return out;
}

nlohmann::json parse_list(const std::string& key, const std::string& v) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(v);
  } catch (const nlohmann::json::exception&) {
    bad(key, "expected a list like [1, 2], got '" + v + "'");
  }
  if (!j.is_array()) bad(key, "expected a list like [1, 2], got '" + v + "'");
  return j;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& e : parse_list(key, v)) {
    if (!e.is_number()) bad(key, "list entries must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  for (const auto& e : parse_list(key, v)) {
    if (!e.is_number_unsigned()) bad(key, "list entries must be positive integers");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

std::string real_list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
  return out + "]";
}

}  // namespace

SimulationConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kKnownKeys.contains(key)) throw Error(ErrorCode::kUnknownKey, "unknown key '" + key + "'");
    if (!kv.emplace(key, value).second) bad(key, "given more than once");
  }

  for (const char* req : {"q", "sample_sizes", "error_dist"}) {
    if (!kv.contains(req)) bad(req, "required key missing");
  }

  SimulationConfig c;
  const long long q = parse_integer("q", kv.at("q"));
  if (q < 1 || q > 8) bad("q", "must be in 1..8");
  c.q = static_cast<int>(q);
  c.sample_sizes = parse_size_list("sample_sizes", kv.at("sample_sizes"));

  try {
    c.error = parse_error_distribution(kv.at("error_dist"));
  } catch (const Error& e) {
    bad("error_dist", e.what());
  }
  if (kv.contains("design_dist")) {
    try {
      c.design = parse_design_distribution(kv.at("design_dist"));
    } catch (const Error& e) {
      bad("design_dist", e.what());
    }
  }
  if (kv.contains("beta")) c.beta = parse_real_list("beta", kv.at("beta"));
  if (kv.contains("p")) {
    const long long p = parse_integer("p", kv.at("p"));
    if (p < 0) bad("p", "must be >= 0");
    if (!kv.contains("beta")) {
      c.beta.assign(static_cast<std::size_t>(p), 0.0);
    } else if (static_cast<std::size_t>(p) != c.beta.size()) {
      bad("p", "does not match the length of beta");
    }
  }
  if (kv.contains("test_function")) {
    try {
      c.test_function = parse_test_function(kv.at("test_function"));
    } catch (const Error& e) {
      bad("test_function", e.what());
    }
  }
  if (kv.contains("replications")) {
    c.replications = parse_unsigned("replications", kv.at("replications"));
    if (c.replications == 0) bad("replications", "must be >= 1");
  }
  if (kv.contains("seed")) c.seed = parse_unsigned("seed", kv.at("seed"));
  if (kv.contains("wavelet")) {
    c.wavelet = kv.at("wavelet");
    try {
      build_filter(c.wavelet);
    } catch (const Error& e) {
      bad("wavelet", e.what());
    }
  }
  if (kv.contains("j0") && kv.at("j0") != "auto") {
    const long long j0 = parse_integer("j0", kv.at("j0"));
    if (j0 < 0 || j0 > 62) bad("j0", "must be in 0..62");
    c.j0 = static_cast<int>(j0);
  }
  if (kv.contains("block_cardinality") && kv.at("block_cardinality") != "auto") {
    c.block_cardinality = parse_unsigned("block_cardinality", kv.at("block_cardinality"));
    if (*c.block_cardinality == 0) bad("block_cardinality", "must be >= 1");
  }
  if (kv.contains("noise_mode")) {
    const std::string& v = kv.at("noise_mode");
    if (v == "estimate") {
      c.noise_mode = NoiseMode::kEstimate;
    } else if (v == "known") {
      c.noise_mode = NoiseMode::kKnownAnalytic;
    } else if (v.starts_with("known(") && v.ends_with(")")) {
      c.noise_mode = NoiseMode::kKnownValue;
      c.noise_value = parse_real("noise_mode", trim(v.substr(6, v.size() - 7)));
    } else {
      bad("noise_mode", "expected estimate, known or known(v), got '" + v + "'");
    }
  }
  if (kv.contains("u0")) c.u0 = parse_real_list("u0", kv.at("u0"));

  validate(c);
  if (c.noise_mode == NoiseMode::kKnownAnalytic) {
    try {
      analytic_h_inv_sq(c);
    } catch (const Error& e) {
      bad("noise_mode", e.what());
    }
  }
  return c;
}

SimulationConfig parse_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string emit_config(const SimulationConfig& c) {
  std::ostringstream o;
  o << "q = " << c.q << "\n";
  o << "p = " << c.p() << "\n";
  o << "beta = " << real_list(c.beta) << "\n";
  o << "design_dist = " << to_string(c.design) << "\n";
  o << "error_dist = " << to_string(c.error) << "\n";
  o << "test_function = " << c.test_function.name() << "\n";
  o << "sample_sizes = [";
  for (std::size_t i = 0; i < c.sample_sizes.size(); ++i) o << (i ? ", " : "") << c.sample_sizes[i];
  o << "]\n";
  o << "replications = " << c.replications << "\n";
  o << "seed = " << c.seed << "\n";
  o << "wavelet = " << c.wavelet << "\n";
  o << "j0 = " << (c.j0 ? std::to_string(*c.j0) : "auto") << "\n";
  o << "block_cardinality = " << (c.block_cardinality ? std::to_string(*c.block_cardinality) : "auto") << "\n";
  switch (c.noise_mode) {
    case NoiseMode::kEstimate: o << "noise_mode = estimate\n"; break;
    case NoiseMode::kKnownAnalytic: o << "noise_mode = known\n"; break;
    case NoiseMode::kKnownValue: o << "noise_mode = known(" << format_double(c.noise_value) << ")\n"; break;
  }
  if (c.u0) o << "u0 = " << real_list(*c.u0) << "\n";
  return o.str();
}

}  // namespace rplm
