#pragma once

#include <cstdint>
#include <vector>

#include "mvps/errors.hpp"

namespace mvps {

// Counter-based uniform generator, fixed across platforms and languages.
//
//   mix64(z): z ^= z>>30; z *= 0xBF58476D1CE4E5B9;
//             z ^= z>>27; z *= 0x94D049BB133111EB; z ^= z>>31;
//   key(seed, stream) = mix64(seed) ^ mix64(stream ^ 0x5851F42D4C957F2D)
//   output_n          = mix64(key + n * 0x9E3779B97F4A7C15),  n = 1,2,...
//   u01_n             = (output_n >> 11) * 2^-53              in [0,1)
//
// (seed, stream) pairs index independent streams; replications use
// stream = replication index so parallel order never matters.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix64(seed) ^ mix64(stream ^ 0x5851F42D4C957F2Dull)) {}

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next_u64() {
        ++counter_;
        return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ull);
    }

    // Uniform on [0,1) with 53 random bits.
    double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Index in [0,n) drawn by the inverse-CDF walk over the given weights
// (need not be normalized; total must be positive).
template <class Rng>
std::size_t sample_categorical(const std::vector<double>& weights, double total, Rng& rng) {
    const double u = rng.next_u01() * total;
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < weights.size(); ++j) {
        acc += weights[j];
        if (u < acc) return j;
    }
    return weights.size() - 1;
}

template <class Rng>
std::size_t sample_categorical(const std::vector<double>& probs, Rng& rng) {
    return sample_categorical(probs, 1.0, rng);
}

}  // namespace mvps
