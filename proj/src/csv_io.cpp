#include "rplm/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rplm/error.hpp"

namespace rplm {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

double parse_number(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": not a number: '" + field + "'");
  }
  return v;
}

std::string header_line(int q, const char* last) {
  std::string h;
  for (int s = 1; s <= q; ++s) h += "u" + std::to_string(s) + ",";
  return h + last;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GridSample parse_grid_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  GridSample out;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (!have_header) {
      const int q = static_cast<int>(fields.size()) - 1;
      bool ok = q >= 1 && fields.back() == "y";
      for (int s = 0; ok && s < q; ++s) ok = fields[s] == "u" + std::to_string(s + 1);
      if (!ok) throw Error(ErrorCode::kHeaderMismatch, "line " + std::to_string(line_no) + ": expected header u1,...,uq,y");
      out.q = q;
      have_header = true;
      continue;
    }
    if (fields.size() != static_cast<std::size_t>(out.q) + 1) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(out.q + 1) + " fields, got " +
                                              std::to_string(fields.size()));
    }
    for (int s = 0; s < out.q; ++s) out.u.push_back(parse_number(fields[s], line_no));
    out.y.push_back(parse_number(fields.back(), line_no));
  }
  if (!have_header) throw Error(ErrorCode::kHeaderMismatch, "empty input: no header");
  return out;
}

GridSample read_grid_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_grid_csv(ss.str());
}

std::string format_estimate_csv(const std::vector<GridValue>& values, int q) {
  std::string out = header_line(q, "fhat") + "\n";
  for (const auto& gv : values) {
    if (gv.point.size() != static_cast<std::size_t>(q)) throw Error(ErrorCode::kShapeMismatch, "point has wrong dimension");
    for (double c : gv.point) out += format_double(c) + ",";
    out += format_double(gv.value) + "\n";
  }
  return out;
}

std::string format_grid_csv(const GridSample& sample) {
  const auto q = static_cast<std::size_t>(sample.q);
  if (sample.u.size() != sample.y.size() * q) throw Error(ErrorCode::kShapeMismatch, "u and y sizes disagree");
  std::string out = header_line(sample.q, "y") + "\n";
  for (std::size_t i = 0; i < sample.y.size(); ++i) {
    for (std::size_t s = 0; s < q; ++s) out += format_double(sample.u[i * q + s]) + ",";
    out += format_double(sample.y[i]) + "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

void write_estimate_csv(const std::filesystem::path& path, const std::vector<GridValue>& values, int q) {
  write_text_file(path, format_estimate_csv(values, q));
}

void write_grid_csv(const std::filesystem::path& path, const GridSample& sample) {
  write_text_file(path, format_grid_csv(sample));
}

}  // namespace rplm
