#include "adrm/modem.hpp"

#include <cmath>
#include <limits>

namespace adrm {

namespace {

std::uint32_t gray_decode(std::uint32_t g) {
  std::uint32_t b = g;
  for (std::uint32_t shift = 1; shift < 32; shift <<= 1) b ^= b >> shift;
  return b;
}

void check_orders(int m, int a) {
  if (!is_power_of_two(m)) throw ConfigError("modulation order must be a power of two");
  if (!is_power_of_two(a)) throw ConfigError("codebook order must be a power of two");
}

}  // namespace

Constellation Constellation::qam(int m) {
  if (!is_power_of_two(m) || m < 2) throw ConfigError("QAM order must be a power of two >= 2");
  Constellation c;
  c.bits = log2_exact(m);
  const int bits_i = (c.bits + 1) / 2;
  const int bits_q = c.bits / 2;
  const int levels_i = 1 << bits_i;
  const int levels_q = 1 << bits_q;
  c.points.resize(m);
  double power = 0.0;
  for (int label = 0; label < m; ++label) {
    const auto li = static_cast<std::uint32_t>(label) >> bits_q;
    const auto lq = static_cast<std::uint32_t>(label) & ((1u << bits_q) - 1u);
    const double xi = 2.0 * gray_decode(li) - (levels_i - 1);
    const double xq = bits_q == 0 ? 0.0 : 2.0 * gray_decode(lq) - (levels_q - 1);
    c.points[label] = {xi, xq};
    power += std::norm(c.points[label]);
  }
  const double scale = 1.0 / std::sqrt(power / m);
  for (auto& p : c.points) p *= scale;
  return c;
}

int rate(int m, int a) {
  check_orders(m, a);
  return log2_exact(m) + log2_exact(a);
}

TxFrame frame_from_indices(int sym, int aap, int m, int a) {
  if (sym < 0 || sym >= m || aap < 0 || aap >= a) throw ConfigError("frame index out of range");
  TxFrame f;
  f.sym = sym;
  f.aap = aap;
  f.word = (static_cast<std::uint32_t>(sym) << log2_exact(a)) | static_cast<std::uint32_t>(aap);
  return f;
}

TxFrame frame_from_word(std::uint32_t word, int m, int a) {
  const int ib = log2_exact(a);
  TxFrame f;
  f.word = word;
  f.aap = static_cast<int>(word & ((1u << ib) - 1u));
  f.sym = static_cast<int>(word >> ib);
  if (f.sym >= m) throw ConfigError("data word exceeds the rate");
  return f;
}

TxFrame map_bits(std::span<const std::uint8_t> bits, int m, int a) {
  const int r = rate(m, a);
  if (static_cast<int>(bits.size()) != r) {
    throw ConfigError("map_bits: expected " + std::to_string(r) + " bits, got " +
                      std::to_string(bits.size()));
  }
  std::uint32_t word = 0;
  for (auto b : bits) word = (word << 1) | (b ? 1u : 0u);
  return frame_from_word(word, m, a);
}

std::vector<std::uint8_t> demap(const TxFrame& frame, int m, int a) {
  const int r = rate(m, a);
  std::vector<std::uint8_t> out(r);
  for (int i = 0; i < r; ++i) out[i] = (frame.word >> (r - 1 - i)) & 1u;
  return out;
}

IndexAlphabet adrm_alphabet(const CVec& group_gains, const AapCodebook& codebook) {
  IndexAlphabet alpha;
  alpha.gains.reserve(codebook.order());
  alpha.amplitudes.reserve(codebook.order());
  for (int k = 0; k < codebook.order(); ++k) {
    const RVec ak = codebook.column(k);
    alpha.gains.push_back(group_gains.transpose() * ak.cast<cplx>());
    alpha.amplitudes.push_back(ak);
  }
  return alpha;
}

IndexAlphabet adrm_alphabet(const RVec& group_gains, const AapCodebook& codebook) {
  return adrm_alphabet(CVec(group_gains.cast<cplx>()), codebook);
}

double noise_variance(const RVec& a_k, const SystemConfig& cfg) {
  return cfg.n_elements * cfg.rho2() * cfg.sigma_r_sq * a_k.squaredNorm() /
             static_cast<double>(a_k.size()) +
         cfg.sigma_0_sq;
}

NoiseDraw draw_noise(const RVec& a_k, const SystemConfig& cfg, Rng& rng) {
  const double var = noise_variance(a_k, cfg);
  return {rng.complex_normal(var), var};
}

CVec ris_noise_weights(const CVec& g, const RVec& theta) {
  CVec w(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) w(i) = g(i) * std::polar(1.0, theta(i));
  return w;
}

NoiseDraw draw_noise_physical(const RVec& a_k, const CVec& weights, const SystemConfig& cfg, Rng& rng) {
  const int n_groups = static_cast<int>(a_k.size());
  const int per = static_cast<int>(weights.size()) / n_groups;
  cplx w{};
  for (int l = 0; l < n_groups; ++l) {
    cplx acc{};
    for (int i = 0; i < per; ++i) acc += weights(l * per + i) * rng.complex_normal(cfg.sigma_r_sq);
    w += a_k(l) * acc;
  }
  w += rng.complex_normal(cfg.sigma_0_sq);
  return {w, noise_variance(a_k, cfg)};
}

NoiseDraw draw_noise_physical(const RVec& a_k, const CVec& g, const RVec& theta,
                              const SystemConfig& cfg, Rng& rng) {
  return draw_noise_physical(a_k, ris_noise_weights(g, theta), cfg, rng);
}

cplx synthesize_group(const CVec& group_gains, const RVec& a_k, cplx s, double p_ap) {
  const cplx gain = group_gains.transpose() * a_k.cast<cplx>();
  return std::sqrt(p_ap) * gain * s;
}

cplx synthesize_elementwise(const ChannelRealization& ch, const RVec& a_k, cplx s, double p_ap) {
  const int n_groups = static_cast<int>(a_k.size());
  const int per = static_cast<int>(ch.f.size()) / n_groups;
  cplx acc{};
  for (int l = 0; l < n_groups; ++l) {
    for (int i = 0; i < per; ++i) {
      const int idx = l * per + i;
      acc += a_k(l) * ch.f(idx) * ch.g(idx) * std::polar(1.0, ch.theta(idx));
    }
  }
  return std::sqrt(p_ap) * acc * s;
}

cplx tx_rx(const TxFrame& frame, const ChannelRealization& ch, const AapCodebook& codebook,
           const Constellation& constellation, const SystemConfig& cfg, Rng& rng, NoiseMode mode) {
  const RVec ak = codebook.column(frame.aap);
  const cplx signal =
      synthesize_group(ch.h.cast<cplx>(), ak, constellation.points[frame.sym], cfg.p_ap);
  const NoiseDraw nd = mode == NoiseMode::kClt ? draw_noise(ak, cfg, rng)
                                               : draw_noise_physical(ak, ch.g, ch.theta, cfg, rng);
  return signal + nd.w;
}

MlDetector::MlDetector(const IndexAlphabet& alphabet, const Constellation& constellation,
                       double p_ap)
    : n_sym_(constellation.size()), n_idx_(alphabet.size()) {
  const double amp = std::sqrt(p_ap);
  table_.resize(static_cast<std::size_t>(n_sym_) * n_idx_);
  for (int k = 0; k < n_idx_; ++k) {
    for (int m = 0; m < n_sym_; ++m) table_[k * n_sym_ + m] = amp * alphabet.gains[k] * constellation.points[m];
  }
}

Detection MlDetector::detect(cplx y) const {
  double best = std::numeric_limits<double>::infinity();
  int best_idx = 0;
  for (int i = 0; i < static_cast<int>(table_.size()); ++i) {
    const double d = std::norm(y - table_[i]);
    if (d < best) {
      best = d;
      best_idx = i;
    }
  }
  return {best_idx % n_sym_, best_idx / n_sym_};
}

Detection ml_detect(cplx y, const RVec& h, const Constellation& constellation,
                    const AapCodebook& codebook, const SystemConfig& cfg) {
  return MlDetector(adrm_alphabet(h, codebook), constellation, cfg.p_ap).detect(y);
}

}  // namespace adrm
