#pragma once

#include <cstdint>

#include "wkb/spectral_field.hpp"

namespace wkb {

// Counter-based deterministic generator (splitmix64 finalizer).  Draw k of
// stream `seed` is mix64(seed + (k+1) * 0x9E3779B97F4A7C15); uniform doubles
// take the top 53 bits.  Stateless by construction, so streams can be
// replayed from any language.
struct CounterRng {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    ++counter;
    return mix64(seed + counter * 0x9E3779B97F4A7C15ULL);
  }
  // uniform in [0, 1)
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  // uniform in [-1, 1)
  double next_signed() { return 2.0 * next_double() - 1.0; }
};

// Random band-limited field: coefficients drawn on |m_i| <= max_mode with a
// mild decay, zero elsewhere.  With real_valued set, the spectrum is made
// conjugate-symmetric so the field represents a real function.
SpectralField random_band_limited(const Grid& grid, int max_mode,
                                  std::uint64_t seed, bool real_valued = false);

}  // namespace wkb
