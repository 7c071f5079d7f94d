#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "adrm/analysis.hpp"
#include "adrm/channel.hpp"

using namespace adrm;

namespace {

double q_ref(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

AapCodebook small_codebook() {
  AapCodebook cb;
  cb.a.resize(4, 4);
  cb.a << 1.5, 3.0, 6.0, 9.5,
          2.0, 4.5, 7.0, 9.0,
          1.2, 3.5, 5.5, 8.0,
          1.8, 2.5, 6.5, 9.8;
  return cb;
}

}  // namespace

TEST(Cpep, ExactMatchesGaussianTail) {
  for (double x : {0.0, 0.3, 1.0, 2.0, 4.0}) {
    // P delta^2 / (2 sigma^2) = x^2
    EXPECT_NEAR(cpep_exact(2.0 * x * x, 1.0, 1.0), q_ref(x), 1e-12);
    EXPECT_NEAR(cpep_exact(x * x, 2.0, 1.0), q_ref(x), 1e-12);
  }
}

TEST(Cpep, SpecValues) {
  EXPECT_DOUBLE_EQ(cpep_exact(0.0, 1.0, 1.0), 0.5);
  EXPECT_NEAR(cpep_exact(18.0, 1.0, 1.0), 1.3499e-3, 1e-7);  // argument 3
  EXPECT_DOUBLE_EQ(cpep_approx(0.0, 1.0, 1.0), 1.0 / 3.0);
  EXPECT_GT(cpep_exact(1.0, 1.0, 1.0), cpep_exact(1.0, 2.0, 1.0));
  EXPECT_GE(cpep_approx(1e4, 1.0, 1e-3), 0.0);
}

TEST(Cpep, ApproximationAtArgumentTwo) {
  const double x = 2.0;
  const double exact = q_ref(x);
  const double approx = std::exp(-2.0 * x * x / 4.0) / 12.0 + std::exp(-2.0 * x * x / 3.0) / 4.0;
  const double got = cpep_approx(2.0 * x * x, 1.0, 1.0);
  EXPECT_NEAR(got, approx, 1e-15);
  // The two-exponential form is 25.9% above Q(2), slightly outside 25%.
  EXPECT_NEAR(got / exact - 1.0, 0.2597, 5e-4);
}

TEST(Cpep, ApproximationRatioBounded) {
  for (double x = 0.5; x <= 5.0 + 1e-12; x += 0.05) {
    const double r = cpep_approx(2.0 * x * x, 1.0, 1.0) / cpep_exact(2.0 * x * x, 1.0, 1.0);
    EXPECT_GE(r, 0.5) << x;
    EXPECT_LE(r, 2.0) << x;
  }
}

TEST(Mgf, MatchesMonteCarloForScalarGaussian) {
  const HStatistics st{1.3, 0.4};
  Rng rng(21);
  const int n = 400000;
  for (double beta : {0.5, 2.0}) {
    for (double t : {-0.3, -1.0, 0.1}) {
      double s = 0.0, s2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double h = st.mu + std::sqrt(st.sigma_sq) * rng.normal();
        const double v = std::exp(t * beta * h * h);
        s += v;
        s2 += v * v;
      }
      const double mean = s / n;
      const double se = std::sqrt((s2 / n - mean * mean) / n);
      EXPECT_NEAR(mgf_delta(t, beta, st), mean, 5.0 * se + 1e-12) << beta << " " << t;
    }
  }
  EXPECT_DOUBLE_EQ(mgf_delta(0.0, 3.0, st), 1.0);
  EXPECT_THROW(mgf_delta(1.0, 2.0, st), DomainError);
}

TEST(Mgf, CentralCase) {
  const HStatistics st{0.0, 0.7};
  for (double t : {-2.0, -0.1, 0.2}) EXPECT_NEAR(mgf_delta(t, 1.5, st), 1.0 / std::sqrt(1.0 - 2.1 * t), 1e-14);
}

TEST(MgfExact, ReducesToClosedFormForOneGroup) {
  const HStatistics st{1.3, 0.4};
  CVec c(1);
  c << cplx(0.6, -0.8) * 1.7;
  for (double t : {-3.0, -0.2, 0.1}) {
    EXPECT_NEAR(mgf_delta_exact(t, c, st), mgf_delta(t, c.squaredNorm(), st), 1e-13);
  }
  EXPECT_THROW(mgf_delta_exact(10.0, c, st), DomainError);
}

TEST(MgfExact, MatchesMonteCarloForComplexPairs) {
  const HStatistics st{1.1, 0.3};
  CVec c(3);
  c << cplx(0.5, 0.2), cplx(-0.3, 0.9), cplx(0.4, -0.1);
  Rng rng(22);
  const int n = 400000;
  for (double t : {-0.5, -2.0}) {
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx d = 0.0;
      for (int l = 0; l < 3; ++l) d += (st.mu + std::sqrt(st.sigma_sq) * rng.normal()) * c(l);
      const double v = std::exp(t * std::norm(d));
      s += v;
      s2 += v * v;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_NEAR(mgf_delta_exact(t, c, st), mean, 5.0 * se) << t;
  }
}

TEST(Upep, OneThirdAtZeroPower) {
  SystemConfig cfg;
  cfg.p_ap = 0.0;
  const Constellation c = Constellation::qam(4);
  const AapCodebook cb = small_codebook();
  const HStatistics st = h_statistics(cfg);
  for (int q = 0; q < 16; ++q)
    for (int qh = 0; qh < 16; ++qh)
      if (q != qh) EXPECT_NEAR(upep(q, qh, cb, c, cfg, st), 1.0 / 3.0, 1e-15);
}

TEST(Upep, UsesTransmittedPatternNoise) {
  SystemConfig cfg;
  cfg.p_ap = dbm_to_watt(-20.0);
  const Constellation c = Constellation::qam(4);
  const AapCodebook cb = small_codebook();
  const HStatistics st = h_statistics(cfg);
  // q = 0 (pattern 0), q_hat = 3 (pattern 3): beta symmetric, noise not.
  EXPECT_DOUBLE_EQ(pair_beta(0, 3, cb, c), pair_beta(3, 0, cb, c));
  const double beta = pair_beta(0, 3, cb, c);
  const double v0 = noise_variance(cb.column(0), cfg);
  auto mgf = [&](double t) {
    const double den = 1.0 - 2.0 * beta * st.sigma_sq * t;
    return std::exp(st.mu * st.mu * beta * t / den) / std::sqrt(den);
  };
  const double expect = mgf(-cfg.p_ap / (4.0 * v0)) / 12.0 + mgf(-cfg.p_ap / (3.0 * v0)) / 4.0;
  EXPECT_NEAR(upep(0, 3, cb, c, cfg, st), expect, 1e-14);
  // Pattern 0 has the smaller amplitudes, so less forwarded noise.
  EXPECT_LT(upep(0, 3, cb, c, cfg, st), upep(3, 0, cb, c, cfg, st));
}

TEST(Abep, MatchesIndependentSumAndDecreases) {
  SystemConfig cfg;
  const Constellation c = Constellation::qam(4);
  const AapCodebook cb = small_codebook();
  const HStatistics st = h_statistics(cfg);
  double prev = 1e300;
  for (double dbm : {-40.0, -30.0, -20.0, -10.0}) {
    cfg.p_ap = dbm_to_watt(dbm);
    double sum = 0.0;
    for (int q = 0; q < 16; ++q)
      for (int qh = 0; qh < 16; ++qh)
        if (q != qh) sum += std::popcount(static_cast<unsigned>(q ^ qh)) * upep(q, qh, cb, c, cfg, st);
    const double bound = abep_bound(cb, c, cfg, st);
    EXPECT_NEAR(bound, sum / (4.0 * 16.0), 1e-14 * std::max(1.0, bound));
    EXPECT_LT(bound, prev);
    prev = bound;
  }
}

TEST(Abep, SinglePairReduction) {
  // A = 1, M = 2: one error event each way, Hamming weight 1, R = 1.
  SystemConfig cfg;
  cfg.n_groups = 2;
  cfg.codebook_order = 1;
  cfg.mod_order = 2;
  cfg.p_ap = dbm_to_watt(-30.0);
  const Constellation c = Constellation::qam(2);
  AapCodebook cb;
  cb.a.resize(2, 1);
  cb.a << 3.0, 5.0;
  const HStatistics st = h_statistics(cfg);
  EXPECT_NEAR(abep_bound(cb, c, cfg, st), upep(0, 1, cb, c, cfg, st), 1e-15);
  EXPECT_NEAR(upep(0, 1, cb, c, cfg, st), upep(1, 0, cb, c, cfg, st), 1e-15);
  EXPECT_NEAR(abep_bound(cb, c, cfg, st, MgfForm::kExact), upep(0, 1, cb, c, cfg, st, MgfForm::kExact), 1e-15);
}

TEST(Abep, ExactFormIsTighterForAlignedGroups) {
  // Real positive differences: |sum c|^2 >= ||c||^2, so the exact form decays faster.
  SystemConfig cfg;
  cfg.p_ap = dbm_to_watt(-20.0);
  const Constellation c = Constellation::qam(4);
  const AapCodebook cb = small_codebook();
  const HStatistics st = h_statistics(cfg);
  EXPECT_LT(abep_bound(cb, c, cfg, st, MgfForm::kExact), abep_bound(cb, c, cfg, st));
}

TEST(Abep, ZeroPowerValue) {
  // Every UPEP is 1/3 and the average Hamming weight over q_hat != q is R 2^(R-1) / (2^R - 1).
  SystemConfig cfg;
  cfg.p_ap = 0.0;
  const Constellation c = Constellation::qam(4);
  const AapCodebook cb = small_codebook();
  const double expect = (16.0 * 32.0 / 3.0) / (4.0 * 16.0);
  EXPECT_NEAR(abep_bound(cb, c, cfg, h_statistics(cfg)), expect, 1e-12);
}

TEST(MutualInformation, LimitsAndBounds) {
  SystemConfig cfg;
  const Constellation c = Constellation::qam(4);
  const AapCodebook cb = small_codebook();
  RVec h(4);
  h << 1e-3, 2e-3, 1.5e-3, 0.5e-3;

  cfg.p_ap = 0.0;
  const MiEstimate zero = mi_estimate(h, cb, c, cfg, 2000, 1);
  EXPECT_NEAR(zero.bits, 0.0, 1e-12);

  cfg.p_ap = 10.0;
  const MiEstimate high = mi_estimate(h, cb, c, cfg, 500, 1);
  EXPECT_NEAR(high.bits, 4.0, 1e-6);

  double prev = -1.0;
  for (double dbm : {-60.0, -50.0, -45.0, -40.0}) {
    cfg.p_ap = dbm_to_watt(dbm);
    const MiEstimate mi = mi_estimate(h, cb, c, cfg, 2000, 1);
    EXPECT_GE(mi.bits, -4.0 * mi.std_error);
    EXPECT_LE(mi.bits, 4.0 + 4.0 * mi.std_error);
    EXPECT_GT(mi.bits, prev - 4.0 * mi.std_error);
    EXPECT_GT(mi.std_error, 0.0);
    prev = mi.bits;
  }
  const MiEstimate a = mi_estimate(h, cb, c, cfg, 300, 7, 2);
  const MiEstimate b = mi_estimate(h, cb, c, cfg, 300, 7, 2);
  EXPECT_EQ(a.bits, b.bits);
  EXPECT_THROW(mi_estimate(h, cb, c, cfg, 0, 1), ConfigError);
}
