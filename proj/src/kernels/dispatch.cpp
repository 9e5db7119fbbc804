#include "bellsim/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace bellsim::kernels {

std::string_view backend_name(Backend backend) {
    switch (backend) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

namespace {

Backend resolve_backend() {
    const char* env = std::getenv("BELLSIM_KERNEL");
    if (env != nullptr && *env != '\0') {
        const std::string requested(env);
        if (requested == "scalar") return Backend::scalar;
        if (requested == "avx2") {
#if defined(BELLSIM_HAVE_AVX2)
            if (avx2_available()) return Backend::avx2;
#endif
            throw std::runtime_error("BELLSIM_KERNEL=avx2 requested but AVX2 is not available");
        }
        throw std::runtime_error("unknown BELLSIM_KERNEL value: " + requested);
    }
#if defined(BELLSIM_HAVE_AVX2)
    if (avx2_available()) return Backend::avx2;
#endif
    return Backend::scalar;
}

}  // namespace

Backend active_backend() {
    static const Backend backend = resolve_backend();
    return backend;
}

void count_outcomes(const std::array<double, 4>& cdf, std::uint64_t n_shots, std::uint64_t seed,
                    std::uint64_t stream, std::uint64_t first_shot, bool antithetic,
                    std::array<std::uint64_t, 4>& counts) {
#if defined(BELLSIM_HAVE_AVX2)
    if (active_backend() == Backend::avx2) {
        count_outcomes_avx2(cdf, n_shots, seed, stream, first_shot, antithetic, counts);
        return;
    }
#endif
    count_outcomes_scalar(cdf, n_shots, seed, stream, first_shot, antithetic, counts);
}

}  // namespace bellsim::kernels
