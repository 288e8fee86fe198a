#pragma once

#include <cmath>
#include <cstdint>

namespace reglaw {

// Counter-based stream: output depends only on (seed, key, counter), so draws
// are identical no matter how work is scheduled across threads.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

    std::uint64_t next_u64() {
        std::uint64_t z = mix(seed_ ^ mix(key_ ^ mix(ctr_++)));
        return mix(z + 0x9e3779b97f4a7c15ULL);
    }

    // uniform in (0,1)
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_, key_, ctr_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

inline RngStream rng_stream(std::uint64_t seed, std::uint64_t key) {
    return RngStream(seed, key);
}

} // namespace reglaw
