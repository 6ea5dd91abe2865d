#pragma once

#include <array>
#include <cstdint>

namespace machclock {

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t trajectory_index = 0;
};

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based stream: every draw is a pure function of
/// (master_seed, trajectory_index, step, channel), so results never depend on scheduling.
class CounterRng {
public:
    explicit CounterRng(SeedSpec seed) : seed_(seed) {}

    const SeedSpec& seed() const noexcept { return seed_; }

    /// Two independent uniforms in the open interval (0, 1).
    std::array<double, 2> uniforms(std::uint64_t step, std::uint32_t channel) const;
    double uniform(std::uint64_t step, std::uint32_t channel) const { return uniforms(step, channel)[0]; }
    /// Standard normal via Box-Muller.
    double normal(std::uint64_t step, std::uint32_t channel) const;
    /// Exponential with the given rate.
    double exponential(double rate, std::uint64_t step, std::uint32_t channel) const;

private:
    SeedSpec seed_;
};

} // namespace machclock
