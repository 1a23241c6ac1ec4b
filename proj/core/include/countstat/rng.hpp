#pragma once

#include <cstdint>
#include <random>

namespace countstat {

// splitmix64 step; used for seed scrambling and substream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic random stream. mt19937_64 is fully specified by the
// standard, and all variate transformations in this library are our own,
// so a (seed, call sequence) pair reproduces bit-identical draws on any
// conforming platform. Not thread-safe; give each worker its own stream
// via substream().
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed) {
        std::uint64_t s = seed;
        gen_.seed(splitmix64(s));
    }

    // independent stream derived from (seed, index); merging partial
    // results from substreams is order-independent by construction
    RandomStream substream(std::uint64_t index) const {
        std::uint64_t s = seed_ ^ (0xD1B54A32D192ED03ULL * (index + 1));
        return RandomStream(splitmix64(s));
    }

    std::uint64_t next_u64() { return gen_(); }

    // uniform on the open interval (0, 1); never returns 0 or 1, so logs
    // of draws are always finite
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal by Box-Muller; the spare draw is cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(angle);
        have_spare_ = true;
        return r * std::cos(angle);
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace countstat
