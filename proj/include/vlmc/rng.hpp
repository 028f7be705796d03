#pragma once

#include <cstdint>
#include <span>

namespace vlmc {

// SplitMix64 (Steele, Lea & Flood 2014). Counter-based: the state walks a
// fixed-increment sequence and every output is a finalizing hash of the
// state, so streams from nearby seeds are decorrelated.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Fixed-point multiply (Lemire); the bias of
  // at most n/2^64 is irrelevant for the set sizes used here.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

private:
  std::uint64_t state_;
};

// FNV-1a over a word stream; used to derive independent chain seeds from a
// master seed plus run identity (subset indices, hypothesis tag, ...).
inline std::uint64_t hash_words(std::span<const std::uint64_t> words) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t w : words) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (w >> (8 * byte)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace vlmc
