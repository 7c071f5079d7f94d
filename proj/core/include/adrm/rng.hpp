#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "adrm/types.hpp"

namespace adrm {

/// Philox4x32-10 block function (Salmon et al., counter-based PRNG).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// What a stream is used for. Keeps channel, CSI and trial draws of the same
/// (point, channel) coordinates from ever sharing numbers.
enum class StreamPurpose : std::uint32_t {
  kChannel = 1,
  kCsiError = 2,
  kTrial = 3,
  kDesign = 4,
  kTheory = 5,
  kTest = 99,
};

/// Coordinates of an independent stream, e.g. (grid point, channel, trial).
struct StreamId {
  StreamPurpose purpose = StreamPurpose::kTest;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t c = 0;
};

/// Counter-based generator: the output is a pure function of
/// (seed, stream id, position), so results never depend on which worker
/// thread consumes the stream or in what order streams are visited.
class Rng {
 public:
  using result_type = std::uint32_t;

  Rng(std::uint64_t seed, StreamId id);
  explicit Rng(std::uint64_t seed) : Rng(seed, StreamId{}) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u32(); }

  std::uint32_t next_u32() {
    if (used_ == 4) refill();
    return block_[used_++];
  }
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal, Marsaglia polar method.
  double normal();
  /// Circularly-symmetric complex Gaussian CN(0, variance).
  cplx complex_normal(double variance = 1.0);
  /// Uniform integer in [0, n).
  std::uint32_t below(std::uint32_t n);

 private:
  void refill();
  void normal_pair(double& x, double& y);

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer, used for key derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace adrm
