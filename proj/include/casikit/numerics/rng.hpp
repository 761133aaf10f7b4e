#pragma once

#include <cstdint>

namespace casikit::numerics {

// Counter-based random streams: every draw is a pure function of
// (seed, index), so parallel generation is bit-identical to sequential.

/// 64-bit mix of (seed, index) via the splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t seed, std::uint64_t index);

/// Uniform draw in (0, 1], keyed by (seed, index).
double uniform_at(std::uint64_t seed, std::uint64_t index);

/// Standard normal draw keyed by (seed, index); consumes lanes 2i and 2i+1.
double gaussian_at(std::uint64_t seed, std::uint64_t index);

}  // namespace casikit::numerics
