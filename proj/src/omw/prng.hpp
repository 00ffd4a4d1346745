#pragma once

#include <cstdint>

namespace omw {

// Deterministic splitmix64 stream.  All randomized components derive their
// draws from (seed, purpose, counter) triples so that every artifact is a
// pure function of the user-visible seed, independent of call order
// elsewhere in the program.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n) by rejection, so the distribution is exact.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

private:
  std::uint64_t state_;
};

// Derives an independent stream from a master seed, a fixed purpose constant
// and a counter.  Mixing through splitmix64 twice decorrelates nearby seeds.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t purpose,
                                std::uint64_t counter) {
  SplitMix64 a(seed ^ 0x6a09e667f3bcc908ULL);
  std::uint64_t s = a.next();
  SplitMix64 b(s ^ purpose * 0x9e3779b97f4a7c15ULL);
  std::uint64_t t = b.next();
  return SplitMix64(t ^ counter * 0xc2b2ae3d27d4eb4fULL);
}

// Purpose constants for the randomized construction.
namespace stream {
constexpr std::uint64_t kGBits = 0x67626974ULL;       // entanglement coin flips
constexpr std::uint64_t kUChoice = 0x75636f69ULL;     // tilt direction choice
constexpr std::uint64_t kEps = 0x65707331ULL;         // jitter numerators
constexpr std::uint64_t kValidatePairs = 0x76706169ULL;  // sampled axiom pairs
constexpr std::uint64_t kMonteCarlo = 0x6d633031ULL;  // probability trials
constexpr std::uint64_t kSearch = 0x73726368ULL;      // non-member search
}  // namespace stream

}  // namespace omw
