// Compiled with -mavx2 -mfma; only reached through the dispatcher after a
// runtime CPU check.
#include "rvkit/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace rvkit::simd::detail {

namespace {

inline double hsum(__m256d v) noexcept {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(pair, pair);
    return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

inline __m256d abs_pd(__m256d v) noexcept {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double sum_avx2(const double* x, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    if (i + 4 <= n) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        i += 4;
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        acc += x[i];
    }
    return acc;
}

double sum_squares_avx2(const double* x, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d a = _mm256_loadu_pd(x + i);
        const __m256d b = _mm256_loadu_pd(x + i + 4);
        acc0 = _mm256_fmadd_pd(a, a, acc0);
        acc1 = _mm256_fmadd_pd(b, b, acc1);
    }
    if (i + 4 <= n) {
        const __m256d a = _mm256_loadu_pd(x + i);
        acc0 = _mm256_fmadd_pd(a, a, acc0);
        i += 4;
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        acc += x[i] * x[i];
    }
    return acc;
}

double sum_abs_adjacent_products_avx2(const double* x, std::size_t n) noexcept {
    if (n < 2) {
        return 0.0;
    }
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 1;
    for (; i + 4 <= n; i += 4) {
        const __m256d cur = abs_pd(_mm256_loadu_pd(x + i));
        const __m256d prev = abs_pd(_mm256_loadu_pd(x + i - 1));
        acc = _mm256_fmadd_pd(cur, prev, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        total += std::fabs(x[i]) * std::fabs(x[i - 1]);
    }
    return total;
}

double dot_avx2(const double* a, const double* b, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double gather_sum_avx2(const double* values, const std::size_t* index, std::size_t n) noexcept {
    static_assert(sizeof(std::size_t) == sizeof(long long));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i idx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(index + i));
        acc = _mm256_add_pd(acc, _mm256_i64gather_pd(values, idx, 8));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        total += values[index[i]];
    }
    return total;
}

void squared_errors_avx2(const double* a, const double* f, double* out, std::size_t n) noexcept {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d e = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(f + i));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(e, e));
    }
    for (; i < n; ++i) {
        const double e = a[i] - f[i];
        out[i] = e * e;
    }
}

void absolute_errors_avx2(const double* a, const double* f, double* out, std::size_t n) noexcept {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d e = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(f + i));
        _mm256_storeu_pd(out + i, abs_pd(e));
    }
    for (; i < n; ++i) {
        out[i] = std::fabs(a[i] - f[i]);
    }
}

void absolute_percentage_errors_avx2(const double* a, const double* f, double* out,
                                     std::size_t n) noexcept {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d av = _mm256_loadu_pd(a + i);
        const __m256d e = abs_pd(_mm256_sub_pd(av, _mm256_loadu_pd(f + i)));
        _mm256_storeu_pd(out + i, _mm256_div_pd(e, abs_pd(av)));
    }
    for (; i < n; ++i) {
        out[i] = std::fabs(a[i] - f[i]) / std::fabs(a[i]);
    }
}

void symmetric_percentage_errors_avx2(const double* a, const double* f, double* out,
                                      std::size_t n) noexcept {
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d av = _mm256_loadu_pd(a + i);
        const __m256d fv = _mm256_loadu_pd(f + i);
        const __m256d num = _mm256_mul_pd(two, abs_pd(_mm256_sub_pd(av, fv)));
        _mm256_storeu_pd(out + i, _mm256_div_pd(num, _mm256_add_pd(abs_pd(av), abs_pd(fv))));
    }
    for (; i < n; ++i) {
        out[i] = 2.0 * std::fabs(a[i] - f[i]) / (std::fabs(a[i]) + std::fabs(f[i]));
    }
}

constexpr KernelTable kAvx2{
    sum_avx2,
    sum_squares_avx2,
    sum_abs_adjacent_products_avx2,
    dot_avx2,
    gather_sum_avx2,
    squared_errors_avx2,
    absolute_errors_avx2,
    absolute_percentage_errors_avx2,
    symmetric_percentage_errors_avx2,
};

}  // namespace

const KernelTable& avx2_kernels() noexcept { return kAvx2; }

}  // namespace rvkit::simd::detail
