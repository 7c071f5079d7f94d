#pragma once

#include "adrm/config.hpp"
#include "adrm/types.hpp"

namespace adrm {

struct PowerBreakdown {
  double p_ap = 0.0;
  double p_a_out = 0.0;
  double p_circuit = 0.0;
  double total = 0.0;
};

/// RIS output power P_AP |p^H a_k|^2 + sigma_r^2 ||a_k||^2.
double ris_output_power(const RVec& a_k, const CVec& p, const SystemConfig& cfg);

/// Same with complex per-group reflection weights (phase offsets folded in).
double ris_output_power(const CVec& weights, const CVec& p, const SystemConfig& cfg);

/// Total consumption with unit amplifier efficiency and no DC bias term.
/// `passive` drops the RIS output power.
PowerBreakdown total_power(const SystemConfig& cfg, const RVec& a_k, const CVec& p,
                           double p_circuit_per_element, bool passive = false);

/// Largest uniform gain alpha <= alpha_max with alpha * 1_L inside the
/// output-power budget: min(alpha_max, sqrt(P_a / (P_AP |sum p_l|^2 + L sigma_r^2))).
double uniform_alpha(const CVec& p, const SystemConfig& cfg);

/// Largest uniform gain for arbitrary unit-modulus/zero per-group weights
/// (ON/OFF masks, phase offsets).
double uniform_alpha(const CVec& unit_weights, const CVec& p, const SystemConfig& cfg);

}  // namespace adrm
