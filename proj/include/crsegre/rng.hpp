#pragma once

#include <cstdint>

#include "crsegre/rational.hpp"

namespace crsegre {

/// Deterministic generator for reproducible reports. mt19937_64 output is
/// pinned by the standard; bounded draws avoid std distributions, whose
/// results vary across library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next();
    /// Uniform-ish integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Integer in [lo, hi] inclusive.
    long in_range(long lo, long hi);

    /// Gaussian rational with numerators/denominators bounded by `height`
    /// (default matches the sampling contract used for rank certificates).
    GRat small_grat(long height = 16);
    /// Nonzero variant.
    GRat small_grat_nonzero(long height = 16);

private:
    std::uint64_t state_;
};

}  // namespace crsegre
