#ifndef PPML_RNG_HPP_
#define PPML_RNG_HPP_

#include <cstdint>

namespace ppml {

/// SplitMix64: portable, seedable 64-bit generator. Used everywhere instead
/// of the standard-library distributions so that streams are bit-identical
/// across platforms and compilers for a given seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace ppml

#endif  // PPML_RNG_HPP_
