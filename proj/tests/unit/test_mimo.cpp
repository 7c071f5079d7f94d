#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "adrm/mimo.hpp"

using namespace adrm;

namespace {

SystemConfig mimo_cfg(int n = 16, int nt = 2, int nr = 2) {
  SystemConfig cfg;
  cfg.n_elements = n;
  cfg.n_groups = 4;
  cfg.codebook_order = 4;
  cfg.mod_order = 4;
  cfg.nt = nt;
  cfg.nr = nr;
  return cfg;
}

CVec random_phases(int n, Rng& rng) {
  CVec p(n);
  for (int i = 0; i < n; ++i) p(i) = std::polar(1.0, 2.0 * kPi * rng.uniform());
  return p;
}

AapCodebook ladder_codebook(int groups, int order) {
  AapCodebook cb;
  cb.a.resize(groups, order);
  for (int k = 0; k < order; ++k)
    for (int l = 0; l < groups; ++l) cb.a(l, k) = 1.5 + 2.0 * k + 0.3 * l;
  return cb;
}

}  // namespace

TEST(Correlation, ExponentialAndSqrt) {
  const RMat r = exponential_correlation(5, 0.6);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) EXPECT_DOUBLE_EQ(r(i, j), std::pow(0.6, std::abs(i - j)));
  const RMat s = symmetric_sqrt(r);
  EXPECT_LT((s * s - r).norm(), 1e-12);
  EXPECT_LT((s - s.transpose()).norm(), 1e-14);
  EXPECT_EQ(exponential_correlation(3, 0.0), RMat::Identity(3, 3));
  EXPECT_THROW(exponential_correlation(3, 1.0), ConfigError);
  EXPECT_THROW(symmetric_sqrt(RMat::Zero(2, 2)), NumericalError);
}

TEST(MimoChannels, ShapesAndSecondMoments) {
  SystemConfig cfg = mimo_cfg(32, 2, 3);
  Rng rng(11);
  const int draws = 4000;
  double eh = 0.0, ef = 0.0, eg = 0.0;
  for (int i = 0; i < draws; ++i) {
    const MimoChannels ch = gen_mimo_channels(cfg, rng);
    ASSERT_EQ(ch.h.rows(), 3);
    ASSERT_EQ(ch.h.cols(), 2);
    ASSERT_EQ(ch.f.rows(), 32);
    ASSERT_EQ(ch.g.cols(), 32);
    eh += std::norm(ch.h(1, 1));
    ef += std::norm(ch.f(5, 0));
    eg += std::norm(ch.g(2, 7));
  }
  EXPECT_NEAR(eh / draws / cfg.rho0(), 1.0, 0.08);
  EXPECT_NEAR(ef / draws / cfg.rho1(), 1.0, 0.08);
  EXPECT_NEAR(eg / draws / cfg.rho2(), 1.0, 0.08);
}

TEST(MimoChannels, RayleighDirectLinkHasZeroMean) {
  SystemConfig cfg = mimo_cfg(8, 1, 1);
  Rng rng(12);
  cplx acc = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) acc += gen_mimo_channels(cfg, rng).h(0, 0);
  EXPECT_LT(std::abs(acc / double(draws)) / std::sqrt(cfg.rho0()), 0.03);
}

TEST(MimoChannels, CorrelatedColumns) {
  // NLOS only so the correlation of F's rows follows r^|i-j| exactly.
  SystemConfig cfg = mimo_cfg(8, 2, 2);
  cfg.k1 = 0.0;
  Rng rng(13);
  const double r = 0.7;
  const int draws = 20000;
  cplx c01 = 0.0, c02 = 0.0;
  double p0 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const MimoChannels ch = gen_mimo_channels(cfg, rng, r);
    c01 += ch.f(0, 0) * std::conj(ch.f(1, 0));
    c02 += ch.f(0, 0) * std::conj(ch.f(2, 0));
    p0 += std::norm(ch.f(0, 0));
  }
  EXPECT_NEAR(c01.real() / p0, r, 0.03);
  EXPECT_NEAR(c02.real() / p0, r * r, 0.03);
}

TEST(MimoChannels, ZeroCorrelationMatchesUncorrelatedStream) {
  SystemConfig cfg = mimo_cfg();
  Rng a(14), b(14);
  const MimoChannels x = gen_mimo_channels(cfg, a);
  const MimoChannels y = gen_mimo_channels(cfg, b, 0.0);
  EXPECT_EQ(x.f, y.f);
  EXPECT_EQ(x.g, y.g);
  EXPECT_EQ(x.h, y.h);
}

TEST(Mbcd, QuadraticFormIdentity) {
  SystemConfig cfg = mimo_cfg(12, 2, 3);
  Rng rng(15);
  for (int t = 0; t < 20; ++t) {
    const MimoChannels ch = gen_mimo_channels(cfg, rng);
    const CMat m = build_mc(ch.h, ch.f, ch.g);
    EXPECT_LT((m - m.adjoint()).norm(), 1e-12 * m.norm());
    const CVec phi = random_phases(12, rng);
    CVec v(13);
    v.head(12) = phi.conjugate();
    v(12) = 1.0;
    const cplx q = v.dot(m * v);
    const double direct = cascade_gain(ch, phi);
    EXPECT_NEAR(q.real(), direct, 1e-10 * direct);
    EXPECT_LT(std::fabs(q.imag()), 1e-10 * direct);
  }
}

TEST(Mbcd, UnitModulusAndBeatsRandom) {
  SystemConfig cfg = mimo_cfg(32, 2, 2);
  Rng rng(16);
  int wins = 0;
  for (int t = 0; t < 10; ++t) {
    const MimoChannels ch = gen_mimo_channels(cfg, rng);
    const PhaseSolution sol = mbcd_phases(ch.h, ch.f, ch.g, 20);
    EXPECT_EQ(sol.iterations, 20);
    for (Eigen::Index i = 0; i < sol.phi0.size(); ++i) EXPECT_NEAR(std::abs(sol.phi0(i)), 1.0, 1e-12);
    double best_random = 0.0;
    for (int r = 0; r < 100; ++r) best_random = std::max(best_random, cascade_gain(ch, random_phases(32, rng)));
    wins += cascade_gain(ch, sol.phi0) > best_random;
  }
  EXPECT_EQ(wins, 10);
}

TEST(Mbcd, SingleElementAlignsWithDirectPath) {
  // N = 1, Nt = Nr = 1 with a tiny real positive direct path: the optimum
  // rotates the cascade onto the direct path, phi = exp(-j arg(g f)).
  MimoChannels ch;
  ch.h = CMat::Constant(1, 1, cplx(1e-9, 0.0));
  ch.f = CMat::Constant(1, 1, std::polar(0.7, 0.4));
  ch.g = CMat::Constant(1, 1, std::polar(1.3, -2.1));
  const PhaseSolution sol = mbcd_phases(ch.h, ch.f, ch.g, 5);
  const cplx expect = std::polar(1.0, -(0.4 - 2.1));
  EXPECT_LT(std::abs(sol.phi0(0) - expect), 1e-9);
  EXPECT_NEAR(cascade_gain(ch, sol.phi0), std::pow(0.7 * 1.3 + 1e-9, 2), 1e-12);
}

TEST(MimoEquivalentGains, DefinitionAndSisoReduction) {
  SystemConfig cfg = mimo_cfg(16, 1, 1);
  Rng rng(17);
  const MimoChannels ch = gen_mimo_channels(cfg, rng);
  // Aligned SISO phases: equivalent h_l equals |sum_i f_i g_i phi_i| = sum |f||g|.
  CVec phi(16);
  for (int i = 0; i < 16; ++i) phi(i) = std::polar(1.0, -std::arg(ch.f(i, 0) * ch.g(0, i)));
  const MimoEquivalent eq = mimo_equivalent(ch, phi, 4);
  for (int l = 0; l < 4; ++l) {
    double hl = 0.0, pl = 0.0;
    for (int i = 4 * l; i < 4 * l + 4; ++i) {
      hl += std::abs(ch.f(i, 0)) * std::abs(ch.g(0, i));
      pl += std::norm(ch.f(i, 0));
    }
    EXPECT_NEAR(eq.h(l), hl, 1e-12 * hl);
    EXPECT_NEAR(std::abs(eq.p(l)), std::sqrt(pl), 1e-12 * std::sqrt(pl));
  }
  EXPECT_THROW(mimo_equivalent(ch, phi, 3), ConfigError);
}

TEST(MimoFrames, RatesAndWordLayout) {
  EXPECT_EQ(mimo_rate(2, 4, 8), 7);
  EXPECT_EQ(mimo_rate(2, 2, 8), 5);
  const MimoFrame fr = mimo_frame_from_word(0b10'01'11, 2, 4, 4);
  EXPECT_EQ(fr.syms[0], 2);
  EXPECT_EQ(fr.syms[1], 1);
  EXPECT_EQ(fr.aap, 3);
}

TEST(MimoTransceive, NoiselessMatchesEffectiveChannel) {
  SystemConfig cfg = mimo_cfg(16, 2, 2);
  cfg.sigma_r_sq = 0.0;
  cfg.sigma_0_sq = 0.0;
  Rng rng(18);
  const MimoChannels ch = gen_mimo_channels(cfg, rng);
  const PhaseSolution sol = mbcd_phases(ch.h, ch.f, ch.g, 10);
  const AapCodebook cb = ladder_codebook(4, 4);
  const Constellation c = Constellation::qam(4);
  const MimoFrame fr = mimo_frame_from_word(45, 2, 4, 4);
  const CVec y = mimo_transceive(fr, ch, sol, cb, c, cfg, rng);
  CVec s(2);
  s << c.points[fr.syms[0]], c.points[fr.syms[1]];
  const CVec expect = std::sqrt(cfg.p_ap / 2.0) * effective_channel(ch, sol.phi0, cb.column(fr.aap)) * s;
  EXPECT_LT((y - expect).norm(), 1e-12 * expect.norm());
  const MimoDetector det(ch, sol.phi0, cb, c, cfg);
  EXPECT_EQ(det.hypotheses(), 64);
  EXPECT_EQ(det.detect(y).word, 45u);
}

TEST(MimoTransceive, ForwardedNoiseVariance) {
  SystemConfig cfg = mimo_cfg(16, 1, 1);
  cfg.p_ap = 0.0;
  cfg.sigma_0_sq = 1e-20;
  cfg.sigma_r_sq = 1e-3;
  Rng rng(19);
  const MimoChannels ch = gen_mimo_channels(cfg, rng);
  const PhaseSolution sol = mbcd_phases(ch.h, ch.f, ch.g, 5);
  const AapCodebook cb = ladder_codebook(4, 4);
  const Constellation c = Constellation::qam(4);
  const MimoFrame fr = mimo_frame_from_word(2, 1, 4, 4);
  double expect = cfg.sigma_0_sq;
  for (int i = 0; i < 16; ++i) expect += cfg.sigma_r_sq * std::norm(ch.g(0, i)) * std::pow(cb.a(i / 4, 2), 2);
  const int n = 40000;
  double acc = 0.0, acc_off = 0.0;
  for (int t = 0; t < n; ++t) {
    acc += std::norm(mimo_transceive(fr, ch, sol, cb, c, cfg, rng, true)(0));
    acc_off += std::norm(mimo_transceive(fr, ch, sol, cb, c, cfg, rng, false)(0));
  }
  EXPECT_NEAR(acc / n / expect, 1.0, 0.04);
  EXPECT_NEAR(acc_off / n / cfg.sigma_0_sq, 1.0, 0.04);
}

TEST(MimoDetectorTest, MatchesBruteForce) {
  SystemConfig cfg = mimo_cfg(16, 2, 2);
  cfg.p_ap = dbm_to_watt(-25.0);
  Rng rng(20);
  const MimoChannels ch = gen_mimo_channels(cfg, rng);
  const PhaseSolution sol = mbcd_phases(ch.h, ch.f, ch.g, 10);
  const AapCodebook cb = ladder_codebook(4, 4);
  const Constellation c = Constellation::qam(4);
  const MimoDetector det(ch, sol.phi0, cb, c, cfg);
  for (int t = 0; t < 200; ++t) {
    const MimoFrame fr = mimo_frame_from_word(rng.below(64), 2, 4, 4);
    const CVec y = mimo_transceive(fr, ch, sol, cb, c, cfg, rng);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_word = 0;
    for (int k = 0; k < 4; ++k) {
      const CMat e = std::sqrt(cfg.p_ap / 2.0) * effective_channel(ch, sol.phi0, cb.column(k));
      for (int m0 = 0; m0 < 4; ++m0)
        for (int m1 = 0; m1 < 4; ++m1) {
          CVec s(2);
          s << c.points[m0], c.points[m1];
          const double d = (y - e * s).squaredNorm();
          if (d < best) {
            best = d;
            best_word = static_cast<std::uint32_t>((m0 << 4) | (m1 << 2) | k);
          }
        }
    }
    EXPECT_EQ(det.detect(y).word, best_word);
  }
}

TEST(MimoDetectorTest, RefusesHugeTables) {
  SystemConfig cfg = mimo_cfg(16, 4, 2);
  cfg.mod_order = 16;
  Rng rng(21);
  const MimoChannels ch = gen_mimo_channels(cfg, rng);
  const CVec phi = CVec::Ones(16);
  EXPECT_THROW(MimoDetector(ch, phi, ladder_codebook(4, 4), Constellation::qam(16), cfg), ConfigError);
}
