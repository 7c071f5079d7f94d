#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adrm/channel.hpp"
#include "adrm/config.hpp"
#include "adrm/rng.hpp"
#include "adrm/types.hpp"

namespace adrm {

/// Unit-average-power M-QAM. Point m carries the log2(M)-bit label m read
/// big-endian; positions follow a per-axis Gray map so neighbours differ in
/// one bit. M = 2 is BPSK, odd bit counts give rectangular QAM.
struct Constellation {
  std::vector<cplx> points;
  int bits = 0;

  static Constellation qam(int m);
  int size() const { return static_cast<int>(points.size()); }
  /// Bit label of point m.
  std::uint32_t label(int m) const { return static_cast<std::uint32_t>(m); }
};

/// L x A amplitude matrix; column k is the AAP vector a_k.
struct AapCodebook {
  RMat a;

  int groups() const { return static_cast<int>(a.rows()); }
  int order() const { return static_cast<int>(a.cols()); }
  RVec column(int k) const { return a.col(k); }
};

/// One channel use: symbol index m, pattern index k (both 0-based) and the
/// data word they carry (symbol bits first, then index bits).
struct TxFrame {
  int sym = 0;
  int aap = 0;
  std::uint32_t word = 0;
};

/// log2 M + log2 A.
int rate(int m, int a);

/// First log2 M bits pick the symbol, the remaining log2 A bits pick the
/// pattern, both big-endian. Throws ConfigError on a length mismatch.
TxFrame map_bits(std::span<const std::uint8_t> bits, int m, int a);

/// Inverse of map_bits: the R bits carried by (sym, aap).
std::vector<std::uint8_t> demap(const TxFrame& frame, int m, int a);

TxFrame frame_from_indices(int sym, int aap, int m, int a);
TxFrame frame_from_word(std::uint32_t word, int m, int a);

/// Effective per-pattern gain c_k (before sqrt(P_AP) and the symbol) and the
/// RIS amplitudes used for that pattern. ADRM gives c_k = sum_l gain_l a_k(l);
/// the benchmark schemes build their own alphabets.
struct IndexAlphabet {
  std::vector<cplx> gains;
  std::vector<RVec> amplitudes;

  int size() const { return static_cast<int>(gains.size()); }
};

IndexAlphabet adrm_alphabet(const CVec& group_gains, const AapCodebook& codebook);
IndexAlphabet adrm_alphabet(const RVec& group_gains, const AapCodebook& codebook);

enum class NoiseMode { kClt, kPhysical };

struct NoiseDraw {
  cplx w;
  double variance = 0.0;
};

/// Equivalent noise power N rho_2 sigma_r^2 (sum_l a_k(l)^2) / L + sigma_0^2.
double noise_variance(const RVec& a_k, const SystemConfig& cfg);

/// w ~ CN(0, noise_variance(a_k)).
NoiseDraw draw_noise(const RVec& a_k, const SystemConfig& cfg, Rng& rng);

/// Element-wise noise sum_{l,i} a_k(l) g_li e^{j theta_li} n_r,li + n with
/// independent RIS noise per element. `variance` reports the closed form.
NoiseDraw draw_noise_physical(const RVec& a_k, const CVec& g, const RVec& theta,
                              const SystemConfig& cfg, Rng& rng);
/// Same draw with the per-element weights g_li e^{j theta_li} precomputed
/// (see ris_noise_weights), for loops that reuse one channel.
NoiseDraw draw_noise_physical(const RVec& a_k, const CVec& weights, const SystemConfig& cfg, Rng& rng);
CVec ris_noise_weights(const CVec& g, const RVec& theta);

/// sqrt(P_AP) (sum_l a_k(l) h_l) s, group-level synthesis.
cplx synthesize_group(const CVec& group_gains, const RVec& a_k, cplx s, double p_ap);

/// sqrt(P_AP) (sum_{l,i} a_k(l) f_li g_li e^{j theta_li}) s, element-level synthesis.
cplx synthesize_elementwise(const ChannelRealization& ch, const RVec& a_k, cplx s, double p_ap);

/// Received sample for one frame on a channel realization.
cplx tx_rx(const TxFrame& frame, const ChannelRealization& ch, const AapCodebook& codebook,
           const Constellation& constellation, const SystemConfig& cfg, Rng& rng,
           NoiseMode mode = NoiseMode::kClt);

struct Detection {
  int sym = 0;
  int aap = 0;
};

/// Exhaustive joint ML detector over M * A hypotheses. The hypothesis table
/// is built once per (channel, alphabet); ties resolve to the lowest k, then m.
class MlDetector {
 public:
  MlDetector(const IndexAlphabet& alphabet, const Constellation& constellation, double p_ap);

  Detection detect(cplx y) const;
  cplx hypothesis(int sym, int aap) const { return table_[aap * n_sym_ + sym]; }

 private:
  std::vector<cplx> table_;
  int n_sym_ = 0;
  int n_idx_ = 0;
};

/// Convenience wrapper for a single detection.
Detection ml_detect(cplx y, const RVec& h, const Constellation& constellation,
                    const AapCodebook& codebook, const SystemConfig& cfg);

}  // namespace adrm
