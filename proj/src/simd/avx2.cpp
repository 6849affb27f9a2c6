// Compiled with -mavx2 only; the dispatcher never calls in here unless CPUID
// reports AVX2. No FMA: each lane must round exactly like the scalar kernel.

#include <immintrin.h>

#include <cmath>

#include "gammadep/simd.hpp"

namespace gammadep::simd {

namespace {

inline double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);  // (l0+l2, l1+l3)
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void distance_row_avx2(ColumnView z, std::size_t i, std::size_t begin, std::size_t end, double* out) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    std::size_t j = begin;
    for (; j + 4 <= end; j += 4) {
        __m256d s = _mm256_setzero_pd();
        __m256d c = _mm256_setzero_pd();
        for (std::size_t k = 0; k < z.dims; ++k) {
            const double* col = z.cols + k * z.stride;
            const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(col + j), _mm256_set1_pd(col[i]));
            const __m256d sq = _mm256_mul_pd(diff, diff);
            const __m256d t = _mm256_add_pd(s, sq);
            const __m256d big_s = _mm256_cmp_pd(_mm256_andnot_pd(sign_mask, s), _mm256_andnot_pd(sign_mask, sq),
                                                _CMP_GE_OQ);
            const __m256d comp_s = _mm256_add_pd(_mm256_sub_pd(s, t), sq);
            const __m256d comp_q = _mm256_add_pd(_mm256_sub_pd(sq, t), s);
            c = _mm256_add_pd(c, _mm256_blendv_pd(comp_q, comp_s, big_s));
            s = t;
        }
        _mm256_storeu_pd(out + (j - begin), _mm256_sqrt_pd(_mm256_add_pd(s, c)));
    }
    if (j < end) scalar_kernels().distance_row(z, i, j, end, out + (j - begin));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j)));
    double tail = 0.0;
    for (; j < n; ++j) tail += a[j] * b[j];
    return horizontal_sum(acc) + tail;
}

double gather_dot_avx2(const double* a, const double* b, const std::uint32_t* idx, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m128i vidx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + j));
        const __m256d bv = _mm256_i32gather_pd(b, vidx, 8);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + j), bv));
    }
    double tail = 0.0;
    for (; j < n; ++j) tail += a[j] * b[idx[j]];
    return horizontal_sum(acc) + tail;
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + j));
    double tail = 0.0;
    for (; j < n; ++j) tail += a[j];
    return horizontal_sum(acc) + tail;
}

constexpr KernelTable kAvx2{distance_row_avx2, dot_avx2, gather_dot_avx2, sum_avx2};

}  // namespace

namespace detail {
const KernelTable& avx2_table() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace gammadep::simd
