#include "bellsim/kernels.hpp"

#if defined(BELLSIM_HAVE_AVX2)

#include <immintrin.h>

#include "bellsim/rng.hpp"

namespace bellsim::kernels {

namespace {

// 32x32 -> 32-bit hi/lo products on all eight lanes. _mm256_mul_epu32 only
// covers the even lanes, so the odd lanes go through a shifted second pass.
inline void mulhilo_epu32(__m256i x, std::uint32_t m, __m256i& hi, __m256i& lo) {
    const __m256i mult = _mm256_set1_epi32(static_cast<int>(m));
    const __m256i prod_even = _mm256_mul_epu32(x, mult);
    const __m256i prod_odd = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), mult);
    // prod_even carries hi(x[2j]*m) in odd slots, prod_odd hi(x[2j+1]*m) there.
    hi = _mm256_blend_epi32(_mm256_srli_epi64(prod_even, 32), prod_odd, 0xAA);
    lo = _mm256_mullo_epi32(x, mult);
}

// (bits >> 12) -> double via the exponent-bias trick; exact for values < 2^52,
// so the result is bit-identical to the scalar conversion.
inline __m256d uniform_from_bits(__m256i bits64) {
    const __m256i mant = _mm256_srli_epi64(bits64, 12);
    const __m256i biased = _mm256_or_si256(mant, _mm256_set1_epi64x(0x4330000000000000LL));
    const __m256d shifted = _mm256_sub_pd(_mm256_castsi256_pd(biased), _mm256_set1_pd(0x1.0p52));
    return _mm256_mul_pd(shifted, _mm256_set1_pd(0x1.0p-52));
}

}  // namespace

bool avx2_available() { return __builtin_cpu_supports("avx2"); }

void count_outcomes_avx2(const std::array<double, 4>& cdf, std::uint64_t n_shots,
                         std::uint64_t seed, std::uint64_t stream, std::uint64_t first_shot,
                         bool antithetic, std::array<std::uint64_t, 4>& counts) {
    if (antithetic) {
        // Antithetic pairing routes through the scalar path.
        count_outcomes_scalar(cdf, n_shots, seed, stream, first_shot, antithetic, counts);
        return;
    }

    const __m256i key0 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(seed)));
    const __m256i key1 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(seed >> 32)));
    const __m256i stream_lo = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(stream)));
    const __m256i stream_hi =
        _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(stream >> 32)));
    const __m256i weyl0 = _mm256_set1_epi32(static_cast<int>(rng::kPhiloxW0));
    const __m256i weyl1 = _mm256_set1_epi32(static_cast<int>(rng::kPhiloxW1));

    const __m256d t0 = _mm256_set1_pd(cdf[0]);
    const __m256d t1 = _mm256_set1_pd(cdf[1]);
    const __m256d t2 = _mm256_set1_pd(cdf[2]);

    // Running counts of lanes with u < cdf[j]; cmp masks are all-ones, so
    // subtracting them accumulates per-lane hit counts in 64-bit slots.
    __m256i below0 = _mm256_setzero_si256();
    __m256i below1 = _mm256_setzero_si256();
    __m256i below2 = _mm256_setzero_si256();

    const std::uint64_t vec_shots = n_shots & ~std::uint64_t{7};
    alignas(32) std::uint32_t idx_lo[8];
    alignas(32) std::uint32_t idx_hi[8];

    for (std::uint64_t i = 0; i < vec_shots; i += 8) {
        for (int lane = 0; lane < 8; ++lane) {
            const std::uint64_t shot = first_shot + i + static_cast<std::uint64_t>(lane);
            idx_lo[lane] = static_cast<std::uint32_t>(shot);
            idx_hi[lane] = static_cast<std::uint32_t>(shot >> 32);
        }
        __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(idx_lo));
        __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(idx_hi));
        __m256i c2 = stream_lo;
        __m256i c3 = stream_hi;
        __m256i k0 = key0;
        __m256i k1 = key1;

        for (int round = 0; round < 10; ++round) {
            __m256i hi0, lo0, hi1, lo1;
            mulhilo_epu32(c0, rng::kPhiloxM0, hi0, lo0);
            mulhilo_epu32(c2, rng::kPhiloxM1, hi1, lo1);
            c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0);
            c1 = lo1;
            c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1);
            c3 = lo0;
            k0 = _mm256_add_epi32(k0, weyl0);
            k1 = _mm256_add_epi32(k1, weyl1);
        }

        // bits64 = (c1 << 32) | c0 per lane; interleaving c0/c1 pairs gives the
        // eight 64-bit values split across two registers (lane order permuted,
        // which is fine for a histogram).
        const __m256i bits_a = _mm256_unpacklo_epi32(c0, c1);
        const __m256i bits_b = _mm256_unpackhi_epi32(c0, c1);
        const __m256d u_a = uniform_from_bits(bits_a);
        const __m256d u_b = uniform_from_bits(bits_b);

        below0 = _mm256_sub_epi64(below0, _mm256_castpd_si256(_mm256_cmp_pd(u_a, t0, _CMP_LT_OQ)));
        below0 = _mm256_sub_epi64(below0, _mm256_castpd_si256(_mm256_cmp_pd(u_b, t0, _CMP_LT_OQ)));
        below1 = _mm256_sub_epi64(below1, _mm256_castpd_si256(_mm256_cmp_pd(u_a, t1, _CMP_LT_OQ)));
        below1 = _mm256_sub_epi64(below1, _mm256_castpd_si256(_mm256_cmp_pd(u_b, t1, _CMP_LT_OQ)));
        below2 = _mm256_sub_epi64(below2, _mm256_castpd_si256(_mm256_cmp_pd(u_a, t2, _CMP_LT_OQ)));
        below2 = _mm256_sub_epi64(below2, _mm256_castpd_si256(_mm256_cmp_pd(u_b, t2, _CMP_LT_OQ)));
    }

    alignas(32) std::uint64_t acc[4];
    std::uint64_t n_below0 = 0, n_below1 = 0, n_below2 = 0;
    _mm256_store_si256(reinterpret_cast<__m256i*>(acc), below0);
    for (std::uint64_t v : acc) n_below0 += v;
    _mm256_store_si256(reinterpret_cast<__m256i*>(acc), below1);
    for (std::uint64_t v : acc) n_below1 += v;
    _mm256_store_si256(reinterpret_cast<__m256i*>(acc), below2);
    for (std::uint64_t v : acc) n_below2 += v;

    counts[0] += n_below0;
    counts[1] += n_below1 - n_below0;
    counts[2] += n_below2 - n_below1;
    counts[3] += vec_shots - n_below2;

    if (vec_shots < n_shots) {
        count_outcomes_scalar(cdf, n_shots - vec_shots, seed, stream, first_shot + vec_shots,
                              antithetic, counts);
    }
}

}  // namespace bellsim::kernels

#endif  // BELLSIM_HAVE_AVX2
