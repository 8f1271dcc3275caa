#include "selfnorm/random.hpp"

namespace selfnorm {

Xoshiro256::Xoshiro256(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t x = splitmix64_mix(seed ^ splitmix64_mix(stream ^ 0xD1B54A32D192ED03ULL));
  for (auto& word : s_) {
    x += 0x9E3779B97F4A7C15ULL;
    word = splitmix64_mix(x);
  }
}

}  // namespace selfnorm
