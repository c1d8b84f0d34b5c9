#pragma once

#include <array>
#include <cstdint>

namespace evsynth::rng {

/// Philox4x32-10 block function (Salmon et al., SC'11): a keyed bijection on
/// 128-bit counters. Every output depends only on (counter, key), which is
/// what makes per-pixel streams independent of scheduling.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Sequential variates from one Philox substream. The substream is named by a
/// 64-bit key (the master seed) and two 32-bit stream words; the remaining
/// 64 counter bits index blocks within the substream.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint32_t stream_a, std::uint32_t stream_b);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in (0, 1).
  double uniform_open();
  /// Standard normal via Box-Muller; caches the second variate.
  double normal();
  /// Unbiased integer in [0, n). n must be positive.
  std::uint64_t bounded(std::uint64_t n);

 private:
  void refill();

  Philox4x32::Key key_;
  std::uint32_t stream_a_;
  std::uint32_t stream_b_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace evsynth::rng
