#include "adrm/mimo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adrm {

RMat exponential_correlation(int n, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw ConfigError("correlation coefficient must lie in [0, 1)");
  RMat out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = std::pow(r, std::abs(i - j));
  }
  return out;
}

RMat symmetric_sqrt(const RMat& r) {
  Eigen::SelfAdjointEigenSolver<RMat> es(r);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw NumericalError("correlation matrix is not positive definite");
  }
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

namespace {

CMat nlos(int rows, int cols, Rng& rng) {
  CMat m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_normal(1.0);
  }
  return m;
}

CMat compose(double k, double rho, double d, double lambda, const CMat& scatter) {
  const cplx los = std::polar(1.0, -2.0 * kPi * d / lambda);
  const double sl = std::sqrt(rho * k / (1.0 + k));
  const double sn = std::sqrt(rho / (1.0 + k));
  return CMat::Constant(scatter.rows(), scatter.cols(), sl * los) + sn * scatter;
}

}  // namespace

MimoChannels gen_mimo_channels(const SystemConfig& cfg, Rng& rng, double corr) {
  if (cfg.nt < 1 || cfg.nr < 1) throw ConfigError("nt and nr must be at least 1");
  if (!(corr >= 0.0 && corr < 1.0)) throw ConfigError("correlation coefficient must lie in [0, 1)");
  const int n = cfg.n_elements;
  CMat h_s = nlos(cfg.nr, cfg.nt, rng);
  CMat f_s = nlos(n, cfg.nt, rng);
  CMat g_s = nlos(cfg.nr, n, rng);
  if (corr > 0.0) {
    const CMat r_ap = symmetric_sqrt(exponential_correlation(cfg.nt, corr)).cast<cplx>();
    const CMat r_ris = symmetric_sqrt(exponential_correlation(n, corr)).cast<cplx>();
    const CMat r_user = symmetric_sqrt(exponential_correlation(cfg.nr, corr)).cast<cplx>();
    h_s = r_user * h_s * r_ap;
    f_s = r_ris * f_s * r_ap;
    g_s = r_user * g_s * r_ris;
  }
  MimoChannels ch;
  ch.h = compose(cfg.k0, cfg.rho0(), cfg.d0, cfg.lambda, h_s);
  ch.f = compose(cfg.k1, cfg.rho1(), cfg.d1, cfg.lambda, f_s);
  ch.g = compose(cfg.k2, cfg.rho2(), cfg.d2, cfg.lambda, g_s);
  return ch;
}

CMat build_mc(const CMat& h, const CMat& f, const CMat& g) {
  const Eigen::Index nr = g.rows();
  const Eigen::Index n = f.rows();
  const Eigen::Index nt = f.cols();
  if (h.rows() != nr || h.cols() != nt || g.cols() != n) {
    throw ConfigError("build_mc: inconsistent channel dimensions");
  }
  CMat b(nr * nt, n + 1);
  const CMat fh = f.adjoint();
  for (Eigen::Index r = 0; r < nr; ++r) {
    b.block(r * nt, 0, nt, n) = fh * g.row(r).conjugate().asDiagonal();
    b.block(r * nt, n, nt, 1) = h.row(r).adjoint();
  }
  return b.adjoint() * b;
}

PhaseSolution mbcd_phases(const CMat& h, const CMat& f, const CMat& g, int iterations) {
  if (iterations < 0) throw ConfigError("mbcd_phases: iteration count must be non-negative");
  const CMat mc = build_mc(h, f, g);
  const Eigen::Index n = f.rows();
  CVec psi = CVec::Ones(n + 1);
  for (int it = 0; it < iterations; ++it) {
    const CVec bar = mc * psi;
    for (Eigen::Index i = 0; i <= n; ++i) {
      const double mag = std::abs(bar(i));
      if (mag > 0.0) psi(i) = bar(i) / mag;
    }
  }
  PhaseSolution sol;
  sol.phi0 = (psi.head(n) / psi(n)).conjugate();
  for (Eigen::Index i = 0; i < n; ++i) sol.phi0(i) /= std::abs(sol.phi0(i));
  sol.iterations = iterations;
  return sol;
}

double cascade_gain(const MimoChannels& ch, const CVec& phi) {
  return (ch.h + ch.g * phi.asDiagonal() * ch.f).squaredNorm();
}

namespace {

CVec scaled_phases(const CVec& phi0, const RVec& a_k) {
  const Eigen::Index n = phi0.size();
  const Eigen::Index per = n / a_k.size();
  CVec out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = a_k(i / per) * phi0(i);
  return out;
}

}  // namespace

CMat effective_channel(const MimoChannels& ch, const CVec& phi0, const RVec& a_k) {
  if (phi0.size() % a_k.size() != 0) throw ConfigError("element count not divisible by group count");
  return ch.h + ch.g * scaled_phases(phi0, a_k).asDiagonal() * ch.f;
}

MimoEquivalent mimo_equivalent(const MimoChannels& ch, const CVec& phi0, int n_groups) {
  const Eigen::Index n = ch.f.rows();
  if (n % n_groups != 0) throw ConfigError("element count not divisible by group count");
  const Eigen::Index per = n / n_groups;
  const double nr = static_cast<double>(ch.g.rows());
  const double nt = static_cast<double>(ch.f.cols());
  MimoEquivalent eq;
  eq.h.resize(n_groups);
  eq.p.resize(n_groups);
  for (int l = 0; l < n_groups; ++l) {
    const auto fl = ch.f.middleRows(l * per, per);
    const CMat cl = ch.g.middleCols(l * per, per) * phi0.segment(l * per, per).asDiagonal() * fl;
    eq.h(l) = cl.norm() / std::sqrt(nr * nt);
    eq.p(l) = fl.norm() / std::sqrt(nt);
  }
  return eq;
}

int mimo_rate(int nt, int m, int a) { return nt * log2_exact(m) + log2_exact(a); }

MimoFrame mimo_frame_from_word(std::uint32_t word, int nt, int m, int a) {
  const int sb = log2_exact(m);
  const int ib = log2_exact(a);
  MimoFrame fr;
  fr.word = word;
  fr.aap = static_cast<int>(word & ((1u << ib) - 1u));
  fr.syms.resize(nt);
  std::uint32_t rest = word >> ib;
  for (int t = nt - 1; t >= 0; --t) {
    fr.syms[t] = static_cast<int>(rest & ((1u << sb) - 1u));
    rest >>= sb;
  }
  return fr;
}

CVec mimo_transceive(const MimoFrame& frame, const MimoChannels& ch, const PhaseSolution& phases,
                     const AapCodebook& codebook, const Constellation& constellation,
                     const SystemConfig& cfg, Rng& rng, bool forward_ris_noise) {
  const RVec ak = codebook.column(frame.aap);
  const CVec phi = scaled_phases(phases.phi0, ak);
  const Eigen::Index nt = ch.f.cols();
  CVec s(nt);
  for (Eigen::Index t = 0; t < nt; ++t) s(t) = constellation.points[frame.syms[t]];
  CVec y = std::sqrt(cfg.p_ap / static_cast<double>(nt)) *
           ((ch.h + ch.g * phi.asDiagonal() * ch.f) * s);
  if (forward_ris_noise) {
    CVec nr(ch.f.rows());
    for (Eigen::Index i = 0; i < nr.size(); ++i) nr(i) = rng.complex_normal(cfg.sigma_r_sq);
    y += ch.g * phi.cwiseProduct(nr);
  }
  for (Eigen::Index r = 0; r < y.size(); ++r) y(r) += rng.complex_normal(cfg.sigma_0_sq);
  return y;
}

MimoDetector::MimoDetector(const MimoChannels& ch, const CVec& phi0, const AapCodebook& codebook,
                           const Constellation& constellation, const SystemConfig& cfg)
    : nt_(static_cast<int>(ch.f.cols())), m_(constellation.size()), a_(codebook.order()) {
  long long count = a_;
  for (int t = 0; t < nt_; ++t) count *= m_;
  if (count > kMaxHypotheses) {
    throw ConfigError("MIMO ML detection needs " + std::to_string(count) +
                      " hypotheses, above the limit of " + std::to_string(kMaxHypotheses));
  }
  n_vec_ = static_cast<int>(count / a_);
  CMat svecs(nt_, n_vec_);
  for (int j = 0; j < n_vec_; ++j) {
    int rest = j;
    for (int t = nt_ - 1; t >= 0; --t) {
      svecs(t, j) = constellation.points[rest % m_];
      rest /= m_;
    }
  }
  const double amp = std::sqrt(cfg.p_ap / nt_);
  table_.resize(ch.g.rows(), static_cast<Eigen::Index>(count));
  for (int k = 0; k < a_; ++k) {
    const CMat e = amp * effective_channel(ch, phi0, codebook.column(k));
    table_.middleCols(static_cast<Eigen::Index>(k) * n_vec_, n_vec_) = e * svecs;
  }
}

MimoFrame MimoDetector::detect(const CVec& y) const {
  double best = std::numeric_limits<double>::infinity();
  Eigen::Index best_j = 0;
  for (Eigen::Index j = 0; j < table_.cols(); ++j) {
    const double d = (y - table_.col(j)).squaredNorm();
    if (d < best) {
      best = d;
      best_j = j;
    }
  }
  const int k = static_cast<int>(best_j / n_vec_);
  const int sv = static_cast<int>(best_j % n_vec_);
  const std::uint32_t word = (static_cast<std::uint32_t>(sv) << log2_exact(a_)) | static_cast<std::uint32_t>(k);
  return mimo_frame_from_word(word, nt_, m_, a_);
}

}  // namespace adrm
