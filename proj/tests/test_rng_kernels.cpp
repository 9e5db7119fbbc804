#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdint>

#include "bellsim/kernels.hpp"
#include "bellsim/rng.hpp"

using namespace bellsim;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference vectors cross-checked against an independent Philox
    // implementation (TensorFlow's philox engine produces the same blocks).
    const auto zero = rng::philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(zero == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

    const auto ones = rng::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                      {0xffffffffu, 0xffffffffu});
    CHECK(ones == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

    const auto pi_digits = rng::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                           {0xa4093822u, 0x299f31d0u});
    CHECK(pi_digits ==
          std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});

    const auto packed = rng::philox_block(0x7766554433221100ull, 0x0102030405060708ull,
                                          0x1122334455667788ull);
    CHECK(packed ==
          std::array<std::uint32_t, 4>{0x85b43a35u, 0xa78e1b93u, 0x42853b99u, 0x90cccc6du});
}

TEST_CASE("uniforms live in [0,1) and look uniform") {
    rng::Stream stream(123456789ull, 7ull);
    double sum = 0.0;
    double sum_sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = stream.next_uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sum_sq += u * u;
    }
    const double mean = sum / n;
    const double second_moment = sum_sq / n;
    CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
    CHECK(std::abs(second_moment - 1.0 / 3.0) < 0.005);
}

TEST_CASE("streams with different ids are independent of position") {
    CHECK(rng::uniform_at(1, 0, 5) != rng::uniform_at(1, 1, 5));
    CHECK(rng::uniform_at(1, 0, 5) != rng::uniform_at(2, 0, 5));
    // Same coordinates regenerate the same draw regardless of history.
    rng::Stream a(42, 3);
    (void)a.next_uniform();
    const double second = a.next_uniform();
    CHECK(second == rng::uniform_at(42, 3, 1));
}

namespace {

std::array<double, 4> test_cdf(double p0, double p1, double p2) {
    return {p0, p0 + p1, p0 + p1 + p2, 1.0};
}

}  // namespace

TEST_CASE("scalar counting matches per-shot reference") {
    const auto cdf = test_cdf(0.1, 0.4, 0.3);
    std::array<std::uint64_t, 4> counts{};
    kernels::count_outcomes_scalar(cdf, 5000, 99, 4, 0, false, counts);

    std::array<std::uint64_t, 4> expected{};
    for (std::uint64_t i = 0; i < 5000; ++i) {
        const double u = rng::uniform_at(99, 4, i);
        unsigned bin = 3;
        if (u < cdf[0]) {
            bin = 0;
        } else if (u < cdf[1]) {
            bin = 1;
        } else if (u < cdf[2]) {
            bin = 2;
        }
        ++expected[bin];
    }
    CHECK(counts == expected);
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] == 5000);
}

TEST_CASE("batch splits recombine exactly") {
    const auto cdf = test_cdf(0.25, 0.25, 0.25);
    std::array<std::uint64_t, 4> whole{};
    kernels::count_outcomes(cdf, 10000, 7, 0, 0, false, whole);

    std::array<std::uint64_t, 4> pieces{};
    kernels::count_outcomes(cdf, 1234, 7, 0, 0, false, pieces);
    kernels::count_outcomes(cdf, 4321, 7, 0, 1234, false, pieces);
    kernels::count_outcomes(cdf, 10000 - 1234 - 4321, 7, 0, 5555, false, pieces);
    CHECK(whole == pieces);
}

#if defined(BELLSIM_HAVE_AVX2)
TEST_CASE("avx2 counting is bit-identical to scalar") {
    if (!kernels::avx2_available()) return;

    rng::Stream seeds(2024, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = seeds.next_uniform();
        const double b = seeds.next_uniform();
        const double c = seeds.next_uniform();
        const double total = a + b + c + seeds.next_uniform();
        const auto cdf = test_cdf(a / total, b / total, c / total);
        const auto shots = static_cast<std::uint64_t>(1 + 9973 * seeds.next_uniform());
        const auto seed = static_cast<std::uint64_t>(1e9 * seeds.next_uniform());
        const auto first = static_cast<std::uint64_t>(1e5 * seeds.next_uniform());

        std::array<std::uint64_t, 4> scalar{};
        std::array<std::uint64_t, 4> avx2{};
        kernels::count_outcomes_scalar(cdf, shots, seed, 11, first, false, scalar);
        kernels::count_outcomes_avx2(cdf, shots, seed, 11, first, false, avx2);
        CHECK(scalar == avx2);
    }
}
#endif

TEST_CASE("antithetic pairs balance a fair coin exactly") {
    const std::array<double, 4> cdf{0.5, 1.0, 1.0, 1.0};
    std::array<std::uint64_t, 4> counts{};
    kernels::count_outcomes(cdf, 10000, 31337, 0, 0, true, counts);
    CHECK(counts[0] == 5000);
    CHECK(counts[1] == 5000);
}
