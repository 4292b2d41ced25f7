#pragma once

#include <cmath>
#include <cstdint>

namespace bessel {

// Counter-based generator: output n is a hash of (key, n), where the key is
// derived from (seed, stream).  Streams are therefore reproducible under any
// parallel schedule, and a stream can be replayed from scratch at any time.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(mix(seed ^ 0x9e3779b97f4a7c15ull) + 0xbf58476d1ce4e5b9ull * (stream + 1))) {}

    std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++ctr_); }

    // Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double phi = 6.283185307179586476925286766559 * uniform();
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bessel
