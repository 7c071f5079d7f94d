#include "adrm/channel.hpp"

#include <cmath>

#include "adrm/special.hpp"

namespace adrm {

double path_loss(double d, double v, double rho_r) {
  if (!(d > 0.0)) throw DomainError("path_loss: distance must be positive");
  return rho_r * std::pow(d, -v);
}

CVec gen_rician_vector(double k_factor, double rho, double d, double lambda, int n, Rng& rng) {
  if (k_factor < 0.0) throw DomainError("gen_rician_vector: K must be non-negative");
  if (!(rho > 0.0)) throw DomainError("gen_rician_vector: rho must be positive");
  const double los_w = std::sqrt(k_factor / (1.0 + k_factor));
  const double nlos_w = std::sqrt(1.0 / (1.0 + k_factor));
  const cplx los = std::polar(1.0, -2.0 * kPi * d / lambda);
  const double amp = std::sqrt(rho);
  CVec out(n);
  for (int i = 0; i < n; ++i) out(i) = amp * (los_w * los + nlos_w * rng.complex_normal());
  return out;
}

RVec align_phases(const CVec& f, const CVec& g) {
  if (f.size() != g.size()) throw ConfigError("align_phases: f and g differ in length");
  RVec theta(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (f(i) == cplx{} || g(i) == cplx{}) {
      theta(i) = 0.0;
    } else {
      theta(i) = -(std::arg(f(i)) + std::arg(g(i)));
    }
  }
  return theta;
}

namespace {

int checked_group_size(Eigen::Index n, Eigen::Index g_len, Eigen::Index t_len, int n_groups) {
  if (n != g_len || n != t_len) throw ConfigError("derive_groups: f, g, theta lengths differ");
  if (n_groups <= 0 || n % n_groups != 0) {
    throw ConfigError("derive_groups: N = " + std::to_string(n) +
                      " is not divisible by L = " + std::to_string(n_groups));
  }
  return static_cast<int>(n / n_groups);
}

}  // namespace

std::pair<RVec, CVec> derive_groups(const CVec& f, const CVec& g, const RVec& theta, int n_groups) {
  const int per = checked_group_size(f.size(), g.size(), theta.size(), n_groups);
  RVec h = RVec::Zero(n_groups);
  CVec p = CVec::Zero(n_groups);
  for (int l = 0; l < n_groups; ++l) {
    for (int i = 0; i < per; ++i) {
      const int idx = l * per + i;
      h(l) += std::abs(f(idx)) * std::abs(g(idx));
      p(l) += f(idx) * std::polar(1.0, theta(idx));
    }
  }
  return {h, p};
}

CVec effective_group_gains(const CVec& f, const CVec& g, const RVec& theta, int n_groups) {
  const int per = checked_group_size(f.size(), g.size(), theta.size(), n_groups);
  CVec out = CVec::Zero(n_groups);
  for (int l = 0; l < n_groups; ++l) {
    for (int i = 0; i < per; ++i) {
      const int idx = l * per + i;
      out(l) += f(idx) * g(idx) * std::polar(1.0, theta(idx));
    }
  }
  return out;
}

ChannelRealization draw_channel(const SystemConfig& cfg, Rng& rng) {
  ChannelRealization ch;
  ch.f = gen_rician_vector(cfg.k1, cfg.rho1(), cfg.d1, cfg.lambda, cfg.n_elements, rng);
  ch.g = gen_rician_vector(cfg.k2, cfg.rho2(), cfg.d2, cfg.lambda, cfg.n_elements, rng);
  ch.theta = align_phases(ch.f, ch.g);
  auto [h, p] = derive_groups(ch.f, ch.g, ch.theta, cfg.n_groups);
  ch.h = std::move(h);
  ch.p = std::move(p);
  return ch;
}

double rician_abs_mean(double k_factor, double rho) {
  const double half_k = 0.5 * k_factor;
  return 0.5 * std::sqrt(rho * kPi / (1.0 + k_factor)) * std::exp(-half_k) *
         ((1.0 + k_factor) * bessel_i0(half_k) + k_factor * bessel_i1(half_k));
}

HStatistics h_statistics(const SystemConfig& cfg) {
  const double nbar = cfg.elements_per_group();
  const double rho1 = cfg.rho1();
  const double rho2 = cfg.rho2();
  const double mf = rician_abs_mean(cfg.k1, rho1);
  const double mg = rician_abs_mean(cfg.k2, rho2);
  return {nbar * mf * mg, nbar * (rho1 * rho2 - mf * mf * mg * mg)};
}

}  // namespace adrm
