#pragma once

#include <array>
#include <cstdint>

namespace hyperrate {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Outputs are a
// pure function of (key, counter), so any stream can be reproduced without
// replaying the ones before it.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

// Uniform double in [0, 1) addressed by (seed, stream, index).
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

// Sequential view over one counter stream.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() noexcept;
    double uniform() noexcept; // [0, 1)
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double normal() noexcept;  // Box-Muller
    std::uint64_t below(std::uint64_t bound) noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t index_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace hyperrate
