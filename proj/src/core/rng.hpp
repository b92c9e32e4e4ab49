#pragma once

// Counter-friendly RNG used everywhere randomness appears.  All draws are a
// pure function of a 64-bit seed, so a stored seed reproduces the same bytes
// on any host, compiler, or thread count.  (The standard <random> normal
// distribution is implementation-defined, which would break trace replay.)

#include <cmath>
#include <cstdint>

#include "vec.hpp"

namespace dsgd {

// Finalizer of the splitmix64 generator (Vigna); a good 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent child seed from (master, stream, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
  return mix64(mix64(mix64(master) ^ stream) ^ index);
}

// Stream identifiers keeping the seed spaces of unrelated draws disjoint.
enum : std::uint64_t {
  kStreamNoise = 0x6e6f697365ULL,        // per-iteration gradient noise
  kStreamDelay = 0x64656c6179ULL,        // delay draws inside gen_trace
  kStreamReplication = 0x7265706cULL,    // per-replication master seeds
};

struct SplitMix {
  std::uint64_t state;

  explicit SplitMix(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_unit_open() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound] without modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t span = bound + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % span;
  }
};

// Standard normal draws via Box-Muller, two per round trip.
struct GaussStream {
  SplitMix rng;
  bool have_spare = false;
  double spare = 0.0;

  explicit GaussStream(std::uint64_t seed) : rng(seed) {}

  double next() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double u1 = rng.next_unit_open();
    const double u2 = rng.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;  // 2*pi*u2
    spare = r * std::sin(a);
    have_spare = true;
    return r * std::cos(a);
  }

  void fill(Vec& out) {
    for (double& v : out) v = next();
  }
};

}  // namespace dsgd
