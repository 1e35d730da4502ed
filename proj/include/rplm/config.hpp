#pragma once

#include <filesystem>
#include <string>

#include "rplm/simulation.hpp"

namespace rplm {

/// Line-oriented `key = value` text; `#` starts a comment. Keys:
///   q, p, beta, design_dist, error_dist, test_function, sample_sizes,
///   replications, seed, wavelet, j0, block_cardinality, noise_mode, u0.
/// q, sample_sizes and error_dist are required. Lists use JSON syntax
/// ([1, 2]). noise_mode is `estimate`, `known` (closed-form h(0)) or
/// `known(v)` with v = h(0)^{-2}. j0 and block_cardinality accept `auto`.
/// Throws UnknownKey or BadValue naming the key.
SimulationConfig parse_config_text(const std::string& text);
SimulationConfig parse_config(const std::filesystem::path& path);

/// Canonical text form; parse_config_text(emit_config(c)) == c.
std::string emit_config(const SimulationConfig& config);

}  // namespace rplm
