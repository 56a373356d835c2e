// Philox4x32-10 counter-based generator. Draws are a pure function of
// (key, counter), so Monte Carlo results do not depend on how trials are
// split between workers.
#pragma once

#include <array>
#include <cstdint>

namespace sppolar {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Stream of uniform draws for one trial: counter = (trial lo, trial hi, block lo, block hi).
class TrialStream {
public:
    TrialStream(std::uint64_t seed, std::uint64_t trial);

    std::uint32_t next_u32();
    /// Uniform in [0, 1) with 53 random bits.
    double next_double();
    std::uint8_t next_bit() { return static_cast<std::uint8_t>(next_u32() & 1u); }

private:
    PhiloxKey key_;
    std::uint64_t trial_;
    std::uint64_t block_ = 0;
    PhiloxCounter buffer_{};
    unsigned used_ = 4;
};

}  // namespace sppolar
