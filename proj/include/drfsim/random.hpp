#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace drfsim {

/// SplitMix64 finalizer. Used to derive independent per-task seeds from a
/// master seed so results do not depend on how work is scheduled.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Standard distributions are not, so the helpers below are used
/// instead to keep draws bit-identical across toolchains.
using Engine = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal via Box-Muller (one value per call).
inline double standard_normal(Engine& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace drfsim
