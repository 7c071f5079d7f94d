#include "adrm/power_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adrm {

double ris_output_power(const CVec& weights, const CVec& p, const SystemConfig& cfg) {
  const cplx ph_a = p.dot(weights);  // p^H a
  return cfg.p_ap * std::norm(ph_a) + cfg.sigma_r_sq * weights.squaredNorm();
}

double ris_output_power(const RVec& a_k, const CVec& p, const SystemConfig& cfg) {
  return ris_output_power(CVec(a_k.cast<cplx>()), p, cfg);
}

PowerBreakdown total_power(const SystemConfig& cfg, const RVec& a_k, const CVec& p,
                           double p_circuit_per_element, bool passive) {
  PowerBreakdown b;
  b.p_ap = cfg.p_ap;
  b.p_a_out = passive ? 0.0 : ris_output_power(a_k, p, cfg);
  b.p_circuit = cfg.n_elements * p_circuit_per_element;
  b.total = b.p_ap + b.p_a_out + b.p_circuit;
  return b;
}

double uniform_alpha(const CVec& unit_weights, const CVec& p, const SystemConfig& cfg) {
  const double unit_power = ris_output_power(unit_weights, p, cfg);
  if (unit_power <= 0.0) return cfg.alpha_max;
  return std::min(cfg.alpha_max, std::sqrt(cfg.p_a / unit_power));
}

double uniform_alpha(const CVec& p, const SystemConfig& cfg) {
  return uniform_alpha(CVec::Ones(p.size()), p, cfg);
}

}  // namespace adrm
