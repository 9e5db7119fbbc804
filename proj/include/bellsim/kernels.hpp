#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace bellsim::kernels {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend backend);

// Backend chosen at first use: BELLSIM_KERNEL=scalar|avx2 overrides, otherwise
// AVX2 when the CPU supports it, scalar fallback everywhere else.
Backend active_backend();

// Histogram of sampled outcomes for shots [first_shot, first_shot + n_shots).
//
// cdf must be ascending with cdf[3] == 1.0; outcome(u) = smallest j with
// u < cdf[j]. Shot i draws uniform(seed, stream, i). With antithetic = true,
// shots 2k and 2k+1 share block k as the pair (u, 1 - u).
//
// Counts are pure integer accumulations, so splitting a range into batches
// (or running lanes in parallel) sums to the same histogram bit for bit.
void count_outcomes(const std::array<double, 4>& cdf, std::uint64_t n_shots, std::uint64_t seed,
                    std::uint64_t stream, std::uint64_t first_shot, bool antithetic,
                    std::array<std::uint64_t, 4>& counts);

// Reference implementation; also the tail/antithetic path of the AVX2 kernel.
void count_outcomes_scalar(const std::array<double, 4>& cdf, std::uint64_t n_shots,
                           std::uint64_t seed, std::uint64_t stream, std::uint64_t first_shot,
                           bool antithetic, std::array<std::uint64_t, 4>& counts);

#if defined(BELLSIM_HAVE_AVX2)
void count_outcomes_avx2(const std::array<double, 4>& cdf, std::uint64_t n_shots,
                         std::uint64_t seed, std::uint64_t stream, std::uint64_t first_shot,
                         bool antithetic, std::array<std::uint64_t, 4>& counts);
bool avx2_available();
#endif

}  // namespace bellsim::kernels
