#ifndef FPRW_RNG_HPP
#define FPRW_RNG_HPP

#include <cstdint>

namespace fprw {

// Weyl-sequence increment, 2^64 / golden ratio. Also used to scramble
// replica indices when deriving per-replica seeds.
inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t splitmix64_scramble(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-style generator: state advances by kGoldenGamma, output is the
// scrambled counter. See version.hpp for the documented generator name.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGoldenGamma;
    return splitmix64_scramble(state_);
  }

  // Uniform double in [0,1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Derived seed for replica r. Documented mixing: scramble(base ^ r*gamma).
inline constexpr std::uint64_t split_seed(std::uint64_t base_seed,
                                          std::uint64_t replica) {
  return splitmix64_scramble(base_seed ^ (replica * kGoldenGamma));
}

}  // namespace fprw

#endif
