#pragma once

#include <cstdint>

namespace kaczmarz {

// SplitMix64 (Steele/Lea/Flood, "Fast splittable pseudorandom number
// generators", OOPSLA 2014). Pure 64-bit integer arithmetic, so streams are
// bit-identical across platforms. split() derives an independent stream from
// a parent seed, which keeps multi-trial experiments reproducible without
// coordinating seed offsets by hand.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0,1) with 53 random mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Derive the generator for substream `stream` of this generator's seed.
    SplitMix64 split(std::uint64_t stream) const {
        SplitMix64 mixer(state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        return SplitMix64(mixer.next_u64());
    }

    std::uint64_t state() const { return state_; }

  private:
    std::uint64_t state_;
};

// Standard normal deviate via Box-Muller (one value per call; the second
// branch value is discarded to keep the stream layout simple).
double standard_normal(SplitMix64& rng);

}  // namespace kaczmarz
