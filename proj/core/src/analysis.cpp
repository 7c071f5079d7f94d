#include "adrm/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "adrm/special.hpp"

namespace adrm {

double cpep_exact(double delta_sq, double p_ap, double sigma_w_sq) {
  return q_function(std::sqrt(p_ap * delta_sq / (2.0 * sigma_w_sq)));
}

double cpep_approx(double delta_sq, double p_ap, double sigma_w_sq) {
  const double x = p_ap * delta_sq / sigma_w_sq;
  return std::exp(-x / 4.0) / 12.0 + std::exp(-x / 3.0) / 4.0;
}

double mgf_delta(double t, double beta, const HStatistics& stats) {
  const double den = 1.0 - 2.0 * beta * stats.sigma_sq * t;
  if (den <= 0.0) throw DomainError("mgf_delta: t outside the region of convergence");
  return std::exp(stats.mu * stats.mu * beta * t / den) / std::sqrt(den);
}

double mgf_delta_exact(double t, const CVec& c, const HStatistics& stats) {
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (Eigen::Index l = 0; l < c.size(); ++l) {
    const Eigen::Vector2d v(c(l).real(), c(l).imag());
    cov += v * v.transpose();
  }
  const cplx sum = c.sum();
  const Eigen::Vector2d u(sum.real(), sum.imag());
  const Eigen::Matrix2d m = Eigen::Matrix2d::Identity() - 2.0 * t * stats.sigma_sq * cov;
  const double det = m.determinant();
  if (det <= 0.0 || m(0, 0) <= 0.0) throw DomainError("mgf_delta_exact: t outside the region of convergence");
  return std::exp(t * stats.mu * stats.mu * u.dot(m.inverse() * u)) / std::sqrt(det);
}

CVec pair_difference(int q, int q_hat, const AapCodebook& codebook, const Constellation& constellation) {
  const int ib = log2_exact(codebook.order());
  const int mask = codebook.order() - 1;
  return codebook.column(q & mask).cast<cplx>() * constellation.points[q >> ib] -
         codebook.column(q_hat & mask).cast<cplx>() * constellation.points[q_hat >> ib];
}

double pair_beta(int q, int q_hat, const AapCodebook& codebook, const Constellation& constellation) {
  return pair_difference(q, q_hat, codebook, constellation).squaredNorm();
}

double upep(int q, int q_hat, const AapCodebook& codebook, const Constellation& constellation,
            const SystemConfig& cfg, const HStatistics& stats, MgfForm form) {
  const double var = noise_variance(codebook.column(q & (codebook.order() - 1)), cfg);
  const double t4 = -cfg.p_ap / (4.0 * var);
  const double t3 = -cfg.p_ap / (3.0 * var);
  if (form == MgfForm::kExact) {
    const CVec c = pair_difference(q, q_hat, codebook, constellation);
    return mgf_delta_exact(t4, c, stats) / 12.0 + mgf_delta_exact(t3, c, stats) / 4.0;
  }
  const double beta = pair_beta(q, q_hat, codebook, constellation);
  return mgf_delta(t4, beta, stats) / 12.0 + mgf_delta(t3, beta, stats) / 4.0;
}

double abep_bound(const AapCodebook& codebook, const Constellation& constellation,
                  const SystemConfig& cfg, const HStatistics& stats, MgfForm form) {
  const int r = rate(constellation.size(), codebook.order());
  const int words = 1 << r;
  double sum = 0.0;
  for (int q = 0; q < words; ++q) {
    for (int qh = 0; qh < words; ++qh) {
      if (qh == q) continue;
      const int w = std::popcount(static_cast<unsigned>(q ^ qh));
      sum += w * upep(q, qh, codebook, constellation, cfg, stats, form);
    }
  }
  return sum / (static_cast<double>(r) * words);
}

MiEstimate mi_estimate(const IndexAlphabet& alphabet, const Constellation& constellation,
                       const SystemConfig& cfg, int n_noise_samples, std::uint64_t rng_seed,
                       std::uint32_t stream) {
  if (n_noise_samples < 1) throw ConfigError("mi_estimate: need at least one noise sample");
  const int n_sym = constellation.size();
  const int n_idx = alphabet.size();
  const int words = n_sym * n_idx;
  const double r = std::log2(static_cast<double>(words));
  const double amp = std::sqrt(cfg.p_ap);

  // Word order matches the data word: symbol high, pattern low.
  std::vector<cplx> x(words);
  for (int m = 0; m < n_sym; ++m) {
    for (int k = 0; k < n_idx; ++k) x[m * n_idx + k] = amp * alphabet.gains[k] * constellation.points[m];
  }

  const double ln2 = std::log(2.0);
  std::vector<double> expo(words);
  double mean_sum = 0.0;
  double var_sum = 0.0;
  for (int xi = 0; xi < words; ++xi) {
    const double var = noise_variance(alphabet.amplitudes[xi % n_idx], cfg);
    Rng rng(rng_seed, {StreamPurpose::kTheory, stream, static_cast<std::uint32_t>(xi), 0});
    double s1 = 0.0;
    double s2 = 0.0;
    for (int n = 0; n < n_noise_samples; ++n) {
      const cplx w = rng.complex_normal(var);
      const double w2 = std::norm(w);
      double top = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < words; ++j) {
        expo[j] = -(std::norm(x[xi] - x[j] + w) - w2) / var;
        top = std::max(top, expo[j]);
      }
      double acc = 0.0;
      for (int j = 0; j < words; ++j) acc += std::exp(expo[j] - top);
      const double v = (top + std::log(acc)) / ln2;
      s1 += v;
      s2 += v * v;
    }
    const double mean = s1 / n_noise_samples;
    const double sample_var =
        n_noise_samples > 1 ? std::max(0.0, (s2 - n_noise_samples * mean * mean) / (n_noise_samples - 1)) : 0.0;
    mean_sum += mean;
    var_sum += sample_var / n_noise_samples;
  }
  return {r - mean_sum / words, std::sqrt(var_sum) / words};
}

MiEstimate mi_estimate(const RVec& h, const AapCodebook& codebook,
                       const Constellation& constellation, const SystemConfig& cfg,
                       int n_noise_samples, std::uint64_t rng_seed, std::uint32_t stream) {
  return mi_estimate(adrm_alphabet(h, codebook), constellation, cfg, n_noise_samples, rng_seed,
                     stream);
}

}  // namespace adrm
