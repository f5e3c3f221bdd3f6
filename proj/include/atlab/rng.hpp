#pragma once

#include <cmath>
#include <cstdint>

namespace atlab {

// Counter-style splittable generator. A (seed, stream) pair fully determines
// the sample sequence, independent of host, compiler, or thread schedule.
// Output function is splitmix64; normals come from Box-Muller so the
// sequence does not depend on any library distribution implementation.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : state_(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream_id + 0x6a09e667f3bcc909ull)),
          has_spare_(false), spare_(0.0) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller, one spare cached
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
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

    std::uint64_t state_;
    bool has_spare_;
    double spare_;
};

}  // namespace atlab
