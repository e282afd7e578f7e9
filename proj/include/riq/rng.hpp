#ifndef RIQ_RNG_HPP
#define RIQ_RNG_HPP

#include <cstdint>
#include <random>

namespace riq {

// Thin wrapper around mt19937_64. The raw engine is fully specified by the
// standard, but the distribution classes are not, so ranged draws are done
// explicitly here to keep outputs reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, n). Modulo bias is irrelevant at the sizes used here.
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % static_cast<std::uint64_t>(n));
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double next_double(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace riq

#endif
