#ifndef ATCLOCKS_RANDOM_HPP
#define ATCLOCKS_RANDOM_HPP

#include <cstdint>

namespace atclocks {

// Counter-based uniform stream. A run's randomness is a pure function of
// (seed, run_index), so results do not depend on execution order or on how
// runs are partitioned across workers.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_index)
        : state_(mix(seed ^ mix(stream_index + 0x9e3779b97f4a7c15ULL))) {}

    std::uint64_t next_u64()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1), 53 bits of mantissa.
    double next_uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t mix(std::uint64_t z)
    {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

} // namespace atclocks

#endif
