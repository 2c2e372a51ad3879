#pragma once

#include <array>
#include <cstdint>

namespace movai {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based stream: key = seed, counter = (block index, stream id).
/// Two streams with the same seed and different ids never overlap, and the
/// i-th draw of a stream depends on nothing but (seed, stream, i).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal();
  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint32_t below(std::uint32_t bound);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer, used to derive stream ids and hash-based values.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over bytes.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace movai
