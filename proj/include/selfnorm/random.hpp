#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace selfnorm {

/// SplitMix64 finalizer (Steele, Lea, Flood). Bijective on 64-bit words.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** seeded through SplitMix64.
///
/// Substreams: stream k of a seed is keyed by
///   key = splitmix64_mix(seed ^ splitmix64_mix(k ^ 0xD1B54A32D192ED03))
/// and the four state words are the first four SplitMix64 outputs starting at key.
/// Any (seed, k) pair therefore names one fixed, platform-independent stream.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  static constexpr std::string_view kName = "xoshiro256**/splitmix64-substreams";

  explicit Xoshiro256(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0, 1): 53-bit mantissa, offset by half an ulp.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace selfnorm
