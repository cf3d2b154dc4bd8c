#pragma once

#include <cstdint>

namespace fockline {

/// Counter-based uniform generator: sample i of stream `seed` is a pure
/// function of (seed, i), so parallel and serial enumeration produce
/// identical streams.
std::uint64_t counter_rng(std::uint64_t seed, std::uint64_t index);

/// Uniform double in (0, 1).
double uniform01(std::uint64_t seed, std::uint64_t index);

/// Inverse of the standard normal CDF (Wichura's AS 241, double precision).
double inverse_normal_cdf(double p);

/// Standard normal deviate for sample `index` of stream `seed`.
double normal_sample(std::uint64_t seed, std::uint64_t index);

}  // namespace fockline
