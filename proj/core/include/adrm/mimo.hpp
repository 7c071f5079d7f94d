#pragma once

#include <cstdint>
#include <vector>

#include "adrm/config.hpp"
#include "adrm/modem.hpp"
#include "adrm/rng.hpp"
#include "adrm/types.hpp"

namespace adrm {

/// Direct (Nr x Nt), AP -> RIS (N x Nt) and RIS -> user (Nr x N) channels.
struct MimoChannels {
  CMat h;
  CMat f;
  CMat g;
};

/// Exponential correlation matrix R(i, j) = r^|i - j|. Requires 0 <= r < 1.
RMat exponential_correlation(int n, double r);

/// Symmetric square root of a symmetric positive definite matrix.
RMat symmetric_sqrt(const RMat& r);

/// Rician draws for H, F and G. With corr > 0 the NLOS parts are shaped by
/// Kronecker exponential correlation at the AP, RIS and user; the LOS parts
/// are left as they are. corr = 0 consumes the stream exactly like the
/// uncorrelated draw.
MimoChannels gen_mimo_channels(const SystemConfig& cfg, Rng& rng, double corr = 0.0);

/// M_c = B^H B with B stacking [F^H diag(conj g_r), conj(h_r)^T] over the rows r.
CMat build_mc(const CMat& h, const CMat& f, const CMat& g);

struct PhaseSolution {
  CVec phi0;  ///< unit-modulus RIS phases, length N
  int iterations = 0;
};

/// Power iteration with entrywise phase normalisation on M_c, started from the
/// all-ones vector. Entries that vanish keep their previous phase.
PhaseSolution mbcd_phases(const CMat& h, const CMat& f, const CMat& g, int iterations);

/// ||H + G diag(phi) F||_F^2.
double cascade_gain(const MimoChannels& ch, const CVec& phi);

/// H + G diag(a(l(tau)) phi0(tau)) F with contiguous element groups.
CMat effective_channel(const MimoChannels& ch, const CVec& phi0, const RVec& a_k);

/// Real per-group gains and power sums used to design a codebook with the
/// scalar SCA machinery: h_l = ||G_l diag(phi0_l) F_l||_F / sqrt(Nr Nt) and
/// p_l = ||F_l||_F / sqrt(Nt).
struct MimoEquivalent {
  RVec h;
  CVec p;
};
MimoEquivalent mimo_equivalent(const MimoChannels& ch, const CVec& phi0, int n_groups);

/// Nt log2 M + log2 A.
int mimo_rate(int nt, int m, int a);

/// V-BLAST frame. The data word carries the Nt symbol labels (antenna 0 in
/// the most significant position) followed by the pattern index.
struct MimoFrame {
  std::vector<int> syms;
  int aap = 0;
  std::uint32_t word = 0;
};

MimoFrame mimo_frame_from_word(std::uint32_t word, int nt, int m, int a);

/// y = sqrt(P/Nt) (H + G Phi_k F) s + G Phi_k n_r + n. The forwarded RIS
/// noise term is dropped when forward_ris_noise is false.
CVec mimo_transceive(const MimoFrame& frame, const MimoChannels& ch, const PhaseSolution& phases,
                     const AapCodebook& codebook, const Constellation& constellation,
                     const SystemConfig& cfg, Rng& rng, bool forward_ris_noise = true);

/// Exhaustive joint ML detector over S^Nt x A. Ties resolve to the lowest k,
/// then the lowest symbol-vector index.
class MimoDetector {
 public:
  static constexpr int kMaxHypotheses = 4096;

  /// Throws ConfigError when M^Nt A exceeds kMaxHypotheses.
  MimoDetector(const MimoChannels& ch, const CVec& phi0, const AapCodebook& codebook,
               const Constellation& constellation, const SystemConfig& cfg);

  MimoFrame detect(const CVec& y) const;
  int hypotheses() const { return static_cast<int>(table_.cols()); }

 private:
  CMat table_;  // column j = hypothesis (k = j / n_vec, symbol vector j % n_vec)
  int nt_ = 1;
  int m_ = 2;
  int a_ = 1;
  int n_vec_ = 1;
};

}  // namespace adrm
