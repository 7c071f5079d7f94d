#include <gtest/gtest.h>

#include <cmath>

#include "adrm/channel.hpp"
#include "adrm/special.hpp"

using namespace adrm;

TEST(PathLoss, Examples) {
  EXPECT_DOUBLE_EQ(path_loss(1.0, 2.0, 1e-3), 1e-3);
  EXPECT_NEAR(path_loss(5.0, 2.0, 1e-3), 4e-5, 1e-18);
  EXPECT_NEAR(path_loss(50.0, 2.0, 1e-3), 4e-7, 1e-20);
  EXPECT_THROW(path_loss(0.0, 2.0, 1e-3), DomainError);
  EXPECT_THROW(path_loss(-1.0, 2.0, 1e-3), DomainError);
}

TEST(Rician, PureLosLimit) {
  Rng rng(1);
  const double rho = 4e-5;
  const CVec v = gen_rician_vector(1e12, rho, 5.0, 0.1, 64, rng);
  const cplx los = std::sqrt(rho) * std::polar(1.0, -2.0 * kPi * 5.0 / 0.1);
  for (Eigen::Index i = 0; i < v.size(); ++i) EXPECT_LT(std::abs(v(i) - los) / std::abs(los), 1e-5);
}

TEST(Rician, RayleighMeanMagnitude) {
  Rng rng(2);
  const CVec v = gen_rician_vector(0.0, 1.0, 5.0, 0.1, 1000000, rng);
  const double mean = v.cwiseAbs().mean();
  EXPECT_NEAR(mean, std::sqrt(kPi) / 2.0, 0.005 * std::sqrt(kPi) / 2.0);
}

TEST(Rician, UnitSecondMoment) {
  Rng rng(3);
  const CVec v = gen_rician_vector(3.0, 1.0, 5.0, 0.1, 1000000, rng);
  EXPECT_NEAR(v.squaredNorm() / v.size(), 1.0, 0.01);
}

TEST(AlignPhases, Examples) {
  const CVec f = CVec::Constant(4, 2.0);
  const CVec g = CVec::Constant(4, 0.5);
  EXPECT_EQ(align_phases(f, g), RVec::Zero(4));

  CVec f1(1), g1(1);
  f1(0) = std::polar(1.0, kPi / 4);
  g1(0) = std::polar(1.0, kPi / 4);
  EXPECT_NEAR(align_phases(f1, g1)(0), -kPi / 2, 1e-15);
}

TEST(AlignPhases, ResidueOnRandomChannels) {
  Rng rng(4);
  const CVec f = gen_rician_vector(3.0, 4e-5, 5.0, 0.1, 256, rng);
  const CVec g = gen_rician_vector(3.0, 4e-7, 50.0, 0.1, 256, rng);
  const RVec th = align_phases(f, g);
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const cplx z = f(i) * g(i) * std::polar(1.0, th(i));
    EXPECT_LT(std::fabs(z.imag()), 1e-10 * std::abs(z) + 1e-300);
    EXPECT_GE(z.real(), 0.0);
  }
}

TEST(AlignPhases, ZeroEntryGetsZeroPhase) {
  CVec f = CVec::Ones(2);
  CVec g(2);
  g << cplx(0, 0), cplx(0, 1);
  const RVec th = align_phases(f, g);
  EXPECT_EQ(th(0), 0.0);
  EXPECT_NEAR(th(1), -kPi / 2, 1e-15);
}

TEST(DeriveGroups, AllOnes) {
  const CVec ones = CVec::Ones(8);
  auto [h, p] = derive_groups(ones, ones, RVec::Zero(8), 2);
  EXPECT_EQ(h, RVec::Constant(2, 4.0));
  EXPECT_NEAR(std::abs(p(0) - cplx(4, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p(1) - cplx(4, 0)), 0.0, 1e-15);
}

TEST(DeriveGroups, MatchesDirectProductSum) {
  Rng rng(6);
  const int n = 64, L = 4;
  const CVec f = gen_rician_vector(3.0, 1.0, 5.0, 0.1, n, rng);
  const CVec g = gen_rician_vector(3.0, 1.0, 50.0, 0.1, n, rng);
  const RVec th = align_phases(f, g);
  auto [h, p] = derive_groups(f, g, th, L);
  for (int l = 0; l < L; ++l) {
    double sum = 0.0;
    cplx ps{};
    for (int i = 0; i < n / L; ++i) {
      sum += std::abs(f(l * n / L + i) * g(l * n / L + i));
      ps += f(l * n / L + i) * std::exp(cplx(0, th(l * n / L + i)));
    }
    EXPECT_NEAR(h(l), sum, 1e-12 * sum);
    EXPECT_NEAR(std::abs(p(l) - ps), 0.0, 1e-12 * std::abs(ps));
  }
  const CVec eff = effective_group_gains(f, g, th, L);
  EXPECT_LT((eff - h.cast<cplx>()).norm(), 1e-12 * h.norm());
}

TEST(DeriveGroups, ZeroedGroup) {
  Rng rng(7);
  CVec f = gen_rician_vector(3.0, 1.0, 5.0, 0.1, 8, rng);
  const CVec g = gen_rician_vector(3.0, 1.0, 50.0, 0.1, 8, rng);
  f.head(4).setZero();
  auto [h, p] = derive_groups(f, g, align_phases(f, g), 2);
  EXPECT_EQ(h(0), 0.0);
  EXPECT_EQ(p(0), cplx(0, 0));
  EXPECT_GT(h(1), 0.0);
}

TEST(DeriveGroups, IndivisibleThrows) {
  const CVec ones = CVec::Ones(10);
  EXPECT_THROW(derive_groups(ones, ones, RVec::Zero(10), 3), ConfigError);
}

TEST(DrawChannel, Invariants) {
  SystemConfig cfg;
  Rng rng(8);
  const ChannelRealization ch = draw_channel(cfg, rng);
  ASSERT_EQ(ch.f.size(), cfg.n_elements);
  ASSERT_EQ(ch.h.size(), cfg.n_groups);
  for (int l = 0; l < cfg.n_groups; ++l) EXPECT_GT(ch.h(l), 0.0);
}

TEST(HStatistics, RayleighClosedForm) {
  SystemConfig cfg;
  cfg.k1 = cfg.k2 = 0.0;
  cfg.n_elements = 4;
  cfg.n_groups = 4;
  cfg.rho_r = 1.0;
  cfg.d1 = cfg.d2 = 1.0;
  const HStatistics s = h_statistics(cfg);
  EXPECT_NEAR(s.mu, kPi / 4.0, 1e-12);
  EXPECT_NEAR(s.sigma_sq, 1.0 - kPi * kPi / 16.0, 1e-12);
}

TEST(HStatistics, MatchesMonteCarlo) {
  SystemConfig cfg;
  cfg.n_elements = 64;
  cfg.n_groups = 1;
  cfg.rho_r = 1.0;
  cfg.d1 = cfg.d2 = 1.0;
  const HStatistics s = h_statistics(cfg);
  Rng rng(11);
  const int draws = 100000;
  double m1 = 0, m2 = 0;
  for (int t = 0; t < draws; ++t) {
    const CVec f = gen_rician_vector(3.0, 1.0, 1.0, 0.1, 64, rng);
    const CVec g = gen_rician_vector(3.0, 1.0, 1.0, 0.1, 64, rng);
    const double h = f.cwiseAbs().cwiseProduct(g.cwiseAbs()).sum();
    m1 += h;
    m2 += h * h;
  }
  const double mean = m1 / draws;
  const double var = m2 / draws - mean * mean;
  EXPECT_NEAR(mean, s.mu, 0.01 * s.mu);
  // Sample variance of 1e5 draws has about 0.45% relative standard error.
  EXPECT_NEAR(var, s.sigma_sq, 0.025 * s.sigma_sq);
}

TEST(HStatistics, MeanScalesWithSqrtRho) {
  SystemConfig cfg;
  const double mu = h_statistics(cfg).mu;
  SystemConfig scaled = cfg;
  scaled.d1 = cfg.d1 / 2.0;  // rho_1 grows by 4 for v1 = 2
  EXPECT_NEAR(h_statistics(scaled).mu, 2.0 * mu, 1e-12 * mu);
}

TEST(Bessel, MatchesLibraryAndSeries) {
  for (double x = 0.0; x <= 25.0; x += 0.125) {
    double s0 = 0.0, s1 = 0.0;
    for (int k = 0; k < 60; ++k) {
      const double lg = std::lgamma(k + 1.0);
      s0 += std::exp(2.0 * k * std::log(x / 2.0 + 1e-300) - 2.0 * lg);
      s1 += std::exp((2.0 * k + 1.0) * std::log(x / 2.0 + 1e-300) - lg - std::lgamma(k + 2.0));
    }
    if (x == 0.0) {
      s0 = 1.0;
      s1 = 0.0;
    }
    EXPECT_NEAR(bessel_i0(x), s0, 1e-10 * s0) << x;
    EXPECT_NEAR(bessel_i1(x), s1, 1e-10 * s1 + 1e-300) << x;
    EXPECT_NEAR(bessel_i0(x), std::cyl_bessel_i(0.0, x), 1e-10 * s0) << x;
    EXPECT_NEAR(bessel_i1(x), std::cyl_bessel_i(1.0, x), 1e-10 * s1 + 1e-300) << x;
  }
}

TEST(QFunction, Values) {
  EXPECT_DOUBLE_EQ(q_function(0.0), 0.5);
  EXPECT_NEAR(q_function(3.0), 1.3498980316300946e-3, 1e-12);
}
