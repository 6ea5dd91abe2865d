#include "machclock/rng.hpp"

#include <cmath>
#include <numbers>

namespace machclock {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// 53-bit mantissa mapped into (0, 1)
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::array<double, 2> CounterRng::uniforms(std::uint64_t step, std::uint32_t channel) const {
    const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
                                           channel, static_cast<std::uint32_t>(seed_.trajectory_index)};
    // the high word of the trajectory index folds into the key
    const std::array<std::uint32_t, 2> key{
        static_cast<std::uint32_t>(seed_.master_seed),
        static_cast<std::uint32_t>(seed_.master_seed >> 32) ^ static_cast<std::uint32_t>(seed_.trajectory_index >> 32)};
    const auto out = philox4x32(ctr, key);
    return {to_open_unit(out[0], out[1]), to_open_unit(out[2], out[3])};
}

double CounterRng::normal(std::uint64_t step, std::uint32_t channel) const {
    const auto u = uniforms(step, channel);
    return std::sqrt(-2.0 * std::log(u[0])) * std::cos(2.0 * std::numbers::pi * u[1]);
}

double CounterRng::exponential(double rate, std::uint64_t step, std::uint32_t channel) const {
    return -std::log(uniform(step, channel)) / rate;
}

} // namespace machclock
