#pragma once

// Deterministic counter-based sample generator (splitmix64 finalizer over a
// seeded counter stream). The same (seed, counter) pair yields the same
// double on every platform, which keeps sampled reports reproducible.

#include <cmath>
#include <complex>
#include <cstdint>

namespace fermat {

struct CounterRng {
    std::uint64_t seed = 0;

    /// Uniform double in [0, 1) for the given counter value.
    double uniform(std::uint64_t counter) const {
        std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return double(x >> 11) * 0x1.0p-53;
    }

    /// Attempt-indexed point of the annulus rmin <= |z| <= rmax, uniform in
    /// area (inverse CDF on r^2, uniform angle).
    std::complex<double> annulus(std::uint64_t attempt, double rmin, double rmax) const {
        const double u = uniform(2 * attempt);
        const double v = uniform(2 * attempt + 1);
        const double r = std::sqrt(rmin * rmin + u * (rmax * rmax - rmin * rmin));
        const double theta = 2.0 * M_PI * v;
        return std::polar(r, theta);
    }
};

}  // namespace fermat
