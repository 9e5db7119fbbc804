#include "bellsim/kernels.hpp"

#include "bellsim/rng.hpp"

namespace bellsim::kernels {

namespace {

inline unsigned bin_of(double u, const std::array<double, 4>& cdf) {
    if (u < cdf[0]) return 0;
    if (u < cdf[1]) return 1;
    if (u < cdf[2]) return 2;
    return 3;
}

}  // namespace

void count_outcomes_scalar(const std::array<double, 4>& cdf, std::uint64_t n_shots,
                           std::uint64_t seed, std::uint64_t stream, std::uint64_t first_shot,
                           bool antithetic, std::array<std::uint64_t, 4>& counts) {
    if (!antithetic) {
        for (std::uint64_t i = 0; i < n_shots; ++i) {
            const double u = rng::uniform_at(seed, stream, first_shot + i);
            ++counts[bin_of(u, cdf)];
        }
        return;
    }
    // Shot pair (2k, 2k+1) consumes block k as (u, 1-u). u can be exactly 0,
    // so the mirrored draw is clamped just below 1 to stay in [0,1).
    for (std::uint64_t i = 0; i < n_shots; ++i) {
        const std::uint64_t shot = first_shot + i;
        const double u = rng::uniform_at(seed, stream, shot / 2);
        double draw = (shot % 2 == 0) ? u : 1.0 - u;
        if (draw >= 1.0) draw = 1.0 - 0x1.0p-53;
        ++counts[bin_of(draw, cdf)];
    }
}

}  // namespace bellsim::kernels
