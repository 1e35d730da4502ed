#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rplm/estimator.hpp"

namespace rplm {

struct GridSample {
  int q = 0;
  std::vector<double> u;  // row-major n x q
  std::vector<double> y;

  std::size_t n() const noexcept { return y.size(); }
};

/// Header must read u1,...,uq,y. Accepts LF or CRLF line endings.
/// Throws ParseError (with line number), HeaderMismatch, IoError.
GridSample read_grid_csv(const std::filesystem::path& path);
GridSample parse_grid_csv(const std::string& text);

/// Header u1,...,uq,fhat; one row per bin; %.17g; LF; trailing newline.
std::string format_estimate_csv(const std::vector<GridValue>& values, int q);
void write_estimate_csv(const std::filesystem::path& path, const std::vector<GridValue>& values, int q);

/// Same layout as the input format, for round trips and dataset export.
std::string format_grid_csv(const GridSample& sample);
void write_grid_csv(const std::filesystem::path& path, const GridSample& sample);

/// %.17g
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rplm
