#pragma once

#include <array>
#include <cstdint>

namespace bellsim::rng {

// Philox 4x32-10 counter-based generator (Salmon et al., SC'11).
// Every 128-bit output block is a pure function of (counter, key), so shots
// can be generated out of order, split across batches, or evaluated in SIMD
// lanes and still reproduce the sequential stream bit for bit.
//
// Stream layout used throughout this project:
//   counter words c0,c1 = low/high half of the 64-bit draw index
//   counter words c2,c3 = low/high half of the 64-bit stream id
//   key words    k0,k1 = low/high half of the 64-bit seed

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                               std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * counter[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * counter[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return counter;
}

inline std::array<std::uint32_t, 4> philox_block(std::uint64_t seed, std::uint64_t stream,
                                                 std::uint64_t index) {
    return philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
                      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
}

// Uniform double in [0,1) from one block: 52 bits, scaled by an exact power
// of two so the scalar and AVX2 paths produce identical doubles.
inline double uniform_from_block(const std::array<std::uint32_t, 4>& block) {
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(block[1]) << 32) | static_cast<std::uint64_t>(block[0]);
    return static_cast<double>(bits >> 12) * 0x1.0p-52;
}

inline double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return uniform_from_block(philox_block(seed, stream, index));
}

// Sequential view over one (seed, stream) pair.
class Stream {
  public:
    explicit Stream(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : seed_(seed), stream_(stream) {}

    double next_uniform() noexcept { return uniform_at(seed_, stream_, position_++); }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }
    std::uint64_t position() const noexcept { return position_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t position_ = 0;
};

}  // namespace bellsim::rng
