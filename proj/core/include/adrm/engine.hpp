#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adrm/baselines.hpp"
#include "adrm/channel.hpp"
#include "adrm/codebook.hpp"
#include "adrm/config.hpp"
#include "adrm/modem.hpp"
#include "adrm/rng.hpp"

namespace adrm {

struct SweepSpec {
  std::vector<double> p_ap_grid;  ///< watts, strictly increasing
  long long bits_per_point = 100000;
  int channels_per_point = 10;
  std::uint64_t master_seed = 1;
  double csi_delta = 0.0;  ///< relative CSI error, see apply_csi_error
  NoiseMode noise_mode = NoiseMode::kClt;
  int workers = 1;
  long long min_errors = 100;  ///< fewer errors flag a point as low confidence

  void validate() const;
};

/// What is transmitted: ADRM (SISO or MIMO) or one of the baselines.
struct SchemeSpec {
  SchemeKind kind = SchemeKind::kAdrm;
  BaselineScheme baseline;  ///< used when kind != kAdrm
  ScaOptions sca;
  /// When set, ADRM uses this codebook on every channel instead of designing one.
  std::optional<AapCodebook> fixed_codebook;

  bool mimo = false;
  double correlation = 0.0;  ///< exponential correlation coefficient (MIMO)
  int mbcd_iterations = 20;
  bool forward_ris_noise = true;

  std::string name() const;
  int rate(const SystemConfig& cfg) const;
};

struct BerPoint {
  double p_ap = 0.0;
  long long errors = 0;
  long long frames = 0;  ///< channel uses
  long long bits = 0;    ///< frames * R
  int failed_designs = 0;
  bool low_confidence = false;

  double ber() const { return bits > 0 ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0; }
  double std_error() const;
};

struct BerCurve {
  std::vector<BerPoint> points;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Monte-Carlo BER over the grid. Channel c of every point comes from the
/// stream (channel, 0, c, 0) so all points share the same channel draws;
/// trial t of (point, channel) uses its own stream. Results are identical for
/// any worker count.
BerCurve run_ber_sweep(const SystemConfig& cfg, const SweepSpec& sweep, const SchemeSpec& scheme);

/// Detector-side estimate of a SISO channel: f and g are perturbed by
/// CN(0, delta^2 rho) with rho the link's path loss (rho_1 for f, rho_2 for g),
/// the RIS phases are aligned to the estimate and the group quantities are
/// derived from it. With rho_f = rho_g = 1 the perturbation variance is delta^2.
ChannelRealization apply_csi_error(const ChannelRealization& ch, double delta, double rho_f,
                                   double rho_g, int n_groups, Rng& rng);

struct TheoryPoint {
  double p_ap = 0.0;
  double abep_bound = 0.0;  ///< clipped at 1
  double abep_raw = 0.0;
  double abep_exact = 0.0;  ///< same bound with the exact quadratic-form MGF, unclipped
  double mi = 0.0;
  double mi_std_error = 0.0;
};

struct TheoryOptions {
  int mi_samples = 10000;
  int mi_channels = 1;
};

struct TheoryCurve {
  std::vector<TheoryPoint> points;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// ABEP bound and MI per grid point. The codebook of each point is the fixed
/// codebook when given, otherwise the design on channel 0 of the sweep; MI is
/// averaged over the first mi_channels channels.
TheoryCurve run_theory_sweep(const SystemConfig& cfg, const SweepSpec& sweep,
                             const SchemeSpec& scheme, const TheoryOptions& opts);

/// Channel c as drawn by the sweeps.
ChannelRealization sweep_channel(const SystemConfig& cfg, std::uint64_t seed, int c);

/// Metadata shared by all outputs: the full configuration echo and the seed.
std::vector<std::pair<std::string, std::string>> config_metadata(const SystemConfig& cfg,
                                                                  const SweepSpec& sweep,
                                                                  const SchemeSpec& scheme);

/// '#'-prefixed metadata, then p_ap_dBm,ber,errors,trials,stderr,flag.
void write_ber_csv(std::ostream& os, const BerCurve& curve);
/// '#'-prefixed metadata, then p_ap_dBm,abep_bound,abep_raw,mi,mi_stderr,abep_exact.
void write_theory_csv(std::ostream& os, const TheoryCurve& curve);

/// Version string recorded in every output.
std::string version_string();

}  // namespace adrm
