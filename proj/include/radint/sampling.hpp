#pragma once

// Counter-based random sampling: point k of a run depends only on (seed, k),
// so results do not depend on thread scheduling.

#include <cmath>
#include <cstdint>

#include "radint/elements.hpp"

namespace radint {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream `stream` of a run seeded with `seed`; draw i is a pure function of (seed, stream, i).
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed) ^ splitmix64(~stream)) {}

  std::uint64_t next_u64() { return splitmix64(key_ + 0xD1B54A32D192ED03ULL * ++counter_); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct SamplingRanges {
  double a_min = 1.05, a_max = 2.0;     // length units
  double e_min = 0.01, e_max = 0.7;
  double inc_min_deg = 5, inc_max_deg = 175;
  bool exclude_critical = false;        // reject |4 - 5 s^2| < critical_band
};

/// Random Delaunay state number `index`: a, e, I uniform in their ranges and
/// all angles uniform in [0, 2 pi).
inline DelaunayState<double> sample_state(std::uint64_t seed, std::uint64_t index, const SamplingRanges& ranges,
                                          const ModelParams<double>& params) {
  CounterRng rng(seed, index);
  const double deg = pi_v<double> / 180;
  for (;;) {
    const double a = rng.uniform(ranges.a_min, ranges.a_max);
    const double e = rng.uniform(ranges.e_min, ranges.e_max);
    const double inc = rng.uniform(ranges.inc_min_deg, ranges.inc_max_deg) * deg;
    const double ell = rng.uniform(0, two_pi_v<double>);
    const double g = rng.uniform(0, two_pi_v<double>);
    const double h = rng.uniform(0, two_pi_v<double>);
    const double s = std::sin(inc);
    if (ranges.exclude_critical && std::abs(4 - 5 * s * s) < params.critical_band) continue;
    const double L = std::sqrt(params.mu * a);
    const double G = L * std::sqrt(1 - e * e);
    return {ell, g, h, L, G, G * std::cos(inc)};
  }
}

}  // namespace radint
