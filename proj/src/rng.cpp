#include "kaczmarz/rng.hpp"

#include <cmath>

namespace kaczmarz {

double standard_normal(SplitMix64& rng) {
    // Box-Muller; u1 nudged away from zero so the log is finite.
    const double u1 = rng.next_double();
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1 + 0x1.0p-53)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace kaczmarz
