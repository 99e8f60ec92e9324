#pragma once

#include <cstdint>
#include <random>

namespace senseforge {

// Uniform reals from a 64-bit Mersenne Twister. The mapping from engine
// output to [lo, hi) is fixed here rather than left to
// std::uniform_real_distribution, so seeded tables are identical across
// standard libraries.
class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace senseforge
