#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace gwtw {

/// SplitMix64 finalizer. Used to derive generator state from (seed, stream).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic xoshiro256** stream identified by (seed, stream id).
///
/// The 256-bit state is filled by running SplitMix64 from the starting
/// value `mix64(seed) ^ mix64(stream_id ^ 0xd1b54a32d192ed03)`. Streams with
/// different ids start from unrelated states; the output sequence depends
/// only on the two 64-bit inputs, so it is the same on every platform.
///
/// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double uniform01() noexcept;

  /// Uniform double in (0, 1]; never returns 0.
  double uniform_open_closed() noexcept;

  /// Unbiased uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace gwtw
