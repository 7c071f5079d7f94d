#include "adrm/rng.hpp"

#include <cmath>

namespace adrm {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, StreamId id) {
  const std::uint64_t k = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(id.purpose)));
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  counter_ = {0, id.c, id.b, id.a};
}

void Rng::refill() {
  block_ = philox4x32(counter_, key_);
  ++counter_[0];
  used_ = 0;
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

void Rng::normal_pair(double& x, double& y) {
  // Marsaglia polar method on 32-bit uniforms in (-1, 1).
  double u, v, s;
  do {
    u = (static_cast<double>(next_u32()) + 0.5) * 0x1.0p-31 - 1.0;
    v = (static_cast<double>(next_u32()) + 0.5) * 0x1.0p-31 - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  x = u * f;
  y = v * f;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double x;
  normal_pair(x, spare_);
  has_spare_ = true;
  return x;
}

cplx Rng::complex_normal(double variance) {
  const double s = std::sqrt(0.5 * variance);
  if (has_spare_) {
    const double re = normal();
    return {s * re, s * normal()};
  }
  double x, y;
  normal_pair(x, y);
  return {s * x, s * y};
}

std::uint32_t Rng::below(std::uint32_t n) {
  // Lemire's multiply-shift with rejection.
  std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * n;
  auto lo = static_cast<std::uint32_t>(m);
  if (lo < n) {
    const std::uint32_t threshold = (0u - n) % n;
    while (lo < threshold) {
      m = static_cast<std::uint64_t>(next_u32()) * n;
      lo = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

}  // namespace adrm
