#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace flw {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent stream for one trial; results do not depend on trial order.
inline std::mt19937_64 trial_stream(std::uint64_t master, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(master ^ splitmix64(trial)));
}

// Uniform in (0, 1) from a counter tuple.
inline double hashed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(a ^ splitmix64(b + 0x632BE59BD9B4E019ull)));
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal from a counter tuple (Box-Muller on two hashed uniforms).
// Keyed by position so that a coarse lattice is a sub-sample of a fine one.
inline double hashed_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  double u1 = hashed_uniform(seed, a, 2 * b);
  double u2 = hashed_uniform(seed, a, 2 * b + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace flw
