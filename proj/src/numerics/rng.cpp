#include "casikit/numerics/rng.hpp"

#include <cmath>
#include <numbers>

namespace casikit::numerics {

std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform_at(std::uint64_t seed, std::uint64_t index) {
  // top 53 bits, shifted into (0, 1]
  return (static_cast<double>(mix64(seed, index) >> 11) + 1.0) * 0x1.0p-53;
}

double gaussian_at(std::uint64_t seed, std::uint64_t index) {
  const double u1 = uniform_at(seed, 2 * index);
  const double u2 = uniform_at(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace casikit::numerics
