#pragma once

// Seed derivation and portable sampling helpers.
//
// The standard <random> distributions are implementation-defined, so results
// that must be reproducible across toolchains go through these helpers, which
// only rely on the engine's raw 64-bit output.

#include <cstdint>
#include <random>
#include <string_view>

namespace resilience {

using Rng = std::mt19937_64;

// Sub-seed for a named component of a run, derived from the master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index);

// Uniform in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

// Uniform integer in [0, bound); bound must be > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

}  // namespace resilience
