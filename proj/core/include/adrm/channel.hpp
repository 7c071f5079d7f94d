#pragma once

#include <utility>

#include "adrm/config.hpp"
#include "adrm/rng.hpp"
#include "adrm/types.hpp"

namespace adrm {

/// One draw of the AP -> RIS (f) and RIS -> user (g) links together with
/// the element phases and the derived group quantities.
///
/// Elements are grouped in contiguous blocks of N/L: element i of group l
/// sits at index l * (N/L) + i.
struct ChannelRealization {
  CVec f;      ///< AP -> RIS, length N
  CVec g;      ///< RIS -> user, length N
  RVec theta;  ///< element phases, radians
  RVec h;      ///< group gains h_l = sum_i |f_li| |g_li|, length L
  CVec p;      ///< group sums p_l = sum_i f_li exp(j theta_li), length L
};

/// Large-scale path loss rho_r * d^-v. Throws DomainError for d <= 0.
double path_loss(double d, double v, double rho_r);

/// Rician vector sqrt(rho) (sqrt(K/(1+K)) e^{-j 2 pi d / lambda} + sqrt(1/(1+K)) z),
/// z ~ CN(0, 1) i.i.d. The LOS phase is identical for every entry.
CVec gen_rician_vector(double k_factor, double rho, double d, double lambda, int n, Rng& rng);

/// theta_i = -(arg f_i + arg g_i); zero-magnitude entries get theta_i = 0.
RVec align_phases(const CVec& f, const CVec& g);

/// Group gains h and group sums p for contiguous blocks of N/L elements.
/// Throws ConfigError when the lengths are inconsistent or N mod L != 0.
std::pair<RVec, CVec> derive_groups(const CVec& f, const CVec& g, const RVec& theta, int n_groups);

/// Complex effective per-group gain sum_i f_li g_li exp(j theta_li). Equals h
/// when theta is aligned to (f, g); used when the phases were set from a
/// different channel than the one evaluated (CSI mismatch).
CVec effective_group_gains(const CVec& f, const CVec& g, const RVec& theta, int n_groups);

/// Draws f and g for cfg, aligns the phases and derives h and p.
ChannelRealization draw_channel(const SystemConfig& cfg, Rng& rng);

/// Mean E|x| of a Rician magnitude with factor K and second moment rho.
double rician_abs_mean(double k_factor, double rho);

struct HStatistics {
  double mu = 0.0;        ///< mean of h_l
  double sigma_sq = 0.0;  ///< variance of h_l
};

/// Closed-form mean and variance of one group gain h_l.
HStatistics h_statistics(const SystemConfig& cfg);

}  // namespace adrm
