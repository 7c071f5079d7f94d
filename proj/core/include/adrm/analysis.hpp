#pragma once

#include "adrm/channel.hpp"
#include "adrm/config.hpp"
#include "adrm/modem.hpp"
#include "adrm/rng.hpp"
#include "adrm/types.hpp"

namespace adrm {

/// Conditional PEP Q(sqrt(P |delta|^2 / (2 sigma_w^2))).
double cpep_exact(double delta_sq, double p_ap, double sigma_w_sq);

/// Two-exponential approximation of cpep_exact.
double cpep_approx(double delta_sq, double p_ap, double sigma_w_sq);

/// MGF E[exp(t |delta|^2)] for delta = sum_l h_l c_l with h_l of mean mu and
/// variance sigma^2, beta = ||c||^2. Requires 1 - 2 beta sigma^2 t > 0.
double mgf_delta(double t, double beta, const HStatistics& stats);

/// Exact MGF of |sum_l h_l c_l|^2 for i.i.d. real Gaussian h_l, from the 2 x 2
/// covariance of the real and imaginary parts. Coincides with mgf_delta when
/// all c_l share one phase and L = 1.
double mgf_delta_exact(double t, const CVec& c, const HStatistics& stats);

/// How upep evaluates E[exp(t |delta|^2)]: the closed form with one beta
/// (mgf_delta) or the exact Gaussian quadratic form (mgf_delta_exact).
enum class MgfForm { kSingleBeta, kExact };

/// a_k s_m - a_khat s_mhat for codeword words q and q_hat.
CVec pair_difference(int q, int q_hat, const AapCodebook& codebook, const Constellation& constellation);

/// ||a_k s_m - a_khat s_mhat||^2 for codeword words q and q_hat.
double pair_beta(int q, int q_hat, const AapCodebook& codebook, const Constellation& constellation);

/// Unconditional PEP of the word q being detected as q_hat. The noise
/// variance is taken from the transmitted pattern.
double upep(int q, int q_hat, const AapCodebook& codebook, const Constellation& constellation,
            const SystemConfig& cfg, const HStatistics& stats, MgfForm form = MgfForm::kSingleBeta);

/// Union bound on the average bit error probability, unclipped. Words carry
/// the symbol label in the high bits, the pattern index in the low bits.
double abep_bound(const AapCodebook& codebook, const Constellation& constellation,
                  const SystemConfig& cfg, const HStatistics& stats, MgfForm form = MgfForm::kSingleBeta);

struct MiEstimate {
  double bits = 0.0;
  double std_error = 0.0;  ///< Monte-Carlo standard error of `bits`
};

/// Mutual information of the discrete-input channel y = sqrt(P) c_k s_m + w
/// for the given alphabet, by Monte Carlo over w with a stable log-sum-exp.
/// Each codeword uses n_noise_samples draws from its own stream of `rng_seed`.
MiEstimate mi_estimate(const IndexAlphabet& alphabet, const Constellation& constellation,
                       const SystemConfig& cfg, int n_noise_samples, std::uint64_t rng_seed,
                       std::uint32_t stream = 0);

/// ADRM convenience overload with c_k = h^T a_k.
MiEstimate mi_estimate(const RVec& h, const AapCodebook& codebook,
                       const Constellation& constellation, const SystemConfig& cfg,
                       int n_noise_samples, std::uint64_t rng_seed, std::uint32_t stream = 0);

}  // namespace adrm
