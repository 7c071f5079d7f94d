#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "adrm/codebook.hpp"
#include "adrm/config.hpp"
#include "adrm/engine.hpp"

namespace adrm {

/// Everything a CLI run needs. Parsed from a line-based text file:
///
///   [system]          SystemConfig fields, e.g. p_a = 30 dBm; p_ap is the design power
///   [sweep]           p_ap = -20:2:0 dBm | comma list, bits_per_point, ...
///   [scheme]          name = adrm|pdrm|im|srpm|adrm-mimo, index_bits, ...
///   [design]          max_iterations, rel_tol, epsilon, start, ga_* options
///   [theory]          mi_samples, mi_channels
///   [output]          path
///
/// '#' and ';' start comments. Physical quantities accept "dBm" (converted
/// to watts) and "dB" (converted to a linear ratio) suffixes.
struct RunConfig {
  SystemConfig system;
  SweepSpec sweep;
  SchemeSpec scheme;
  TheoryOptions theory;
  GaOptions ga;
  /// Baseline parameters used by baseline-compare.
  int pdrm_index_bits = 2;
  int im_active_groups = 2;
  int srpm_index_bits = 2;
  std::string output;

  /// Throws ConfigError on invalid combinations.
  void validate() const;
  /// The baseline spec of kind `kind` built from the fields above.
  BaselineScheme baseline(SchemeKind kind) const;
};

/// Number with optional unit suffix: "30 dBm" -> 1 W, "-30 dB" -> 1e-3, "2.5" -> 2.5.
double parse_quantity(const std::string& text);

/// "a:step:b [unit]" (inclusive) or a comma-separated list, each item with an
/// optional suffix. A trailing unit applies to every item. Returns watts.
std::vector<double> parse_power_grid(const std::string& text);

RunConfig parse_run_config(std::istream& is, const std::string& source = "<config>");
RunConfig load_run_config(const std::string& path);

}  // namespace adrm
