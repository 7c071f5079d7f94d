#pragma once

#include <string>

#include "adrm/types.hpp"

namespace adrm {

/// Scalar description of one scenario. All quantities are linear SI units
/// (watts, meters); dB/dBm conversion happens when a config file is parsed.
///
/// Defaults reproduce the reference desk setup: N = 128 elements in L = 4
/// groups, A = 4 patterns, 4-QAM, -80 dBm noise, P_a = 30 dBm, alpha_max = 10,
/// d = (55, 5, 50) m, K = (0, 3, 3), v = (3.5, 2, 2), rho_r = -30 dB.
struct SystemConfig {
  int n_elements = 128;
  int n_groups = 4;
  int codebook_order = 4;
  int mod_order = 4;

  double p_ap = 1e-3;
  double p_a = 1.0;
  double alpha_max = 10.0;
  double sigma_r_sq = 1e-11;
  double sigma_0_sq = 1e-11;

  double d0 = 55.0;
  double d1 = 5.0;
  double d2 = 50.0;
  double k0 = 0.0;
  double k1 = 3.0;
  double k2 = 3.0;
  double v0 = 3.5;
  double v1 = 2.0;
  double v2 = 2.0;
  double rho_r = 1e-3;
  double lambda = 0.1;

  int nt = 1;
  int nr = 1;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  int elements_per_group() const { return n_elements / n_groups; }
  int symbol_bits() const { return log2_exact(mod_order); }
  int index_bits() const { return log2_exact(codebook_order); }

  double rho0() const;  // AP -> user
  double rho1() const;  // AP -> RIS
  double rho2() const;  // RIS -> user
};

}  // namespace adrm
