#include "rvkit/simd/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace rvkit::simd::detail {

namespace {

inline double hsum(float64x2_t v) noexcept { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

double sum_neon(const double* x, std::size_t n) noexcept {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
        acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
    }
    double acc = hsum(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) {
        acc += x[i];
    }
    return acc;
}

double sum_squares_neon(const double* x, std::size_t n) noexcept {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t a = vld1q_f64(x + i);
        const float64x2_t b = vld1q_f64(x + i + 2);
        acc0 = vfmaq_f64(acc0, a, a);
        acc1 = vfmaq_f64(acc1, b, b);
    }
    double acc = hsum(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) {
        acc += x[i] * x[i];
    }
    return acc;
}

double sum_abs_adjacent_products_neon(const double* x, std::size_t n) noexcept {
    if (n < 2) {
        return 0.0;
    }
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 1;
    for (; i + 2 <= n; i += 2) {
        acc = vfmaq_f64(acc, vabsq_f64(vld1q_f64(x + i)), vabsq_f64(vld1q_f64(x + i - 1)));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        total += std::fabs(x[i]) * std::fabs(x[i - 1]);
    }
    return total;
}

double dot_neon(const double* a, const double* b, std::size_t n) noexcept {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double acc = hsum(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double gather_sum_neon(const double* values, const std::size_t* index, std::size_t n) noexcept {
    // No gather instruction; two independent scalar chains.
    double acc0 = 0.0;
    double acc1 = 0.0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc0 += values[index[i]];
        acc1 += values[index[i + 1]];
    }
    double total = acc0 + acc1;
    for (; i < n; ++i) {
        total += values[index[i]];
    }
    return total;
}

void squared_errors_neon(const double* a, const double* f, double* out, std::size_t n) noexcept {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t e = vsubq_f64(vld1q_f64(a + i), vld1q_f64(f + i));
        vst1q_f64(out + i, vmulq_f64(e, e));
    }
    for (; i < n; ++i) {
        const double e = a[i] - f[i];
        out[i] = e * e;
    }
}

void absolute_errors_neon(const double* a, const double* f, double* out, std::size_t n) noexcept {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(out + i, vabdq_f64(vld1q_f64(a + i), vld1q_f64(f + i)));
    }
    for (; i < n; ++i) {
        out[i] = std::fabs(a[i] - f[i]);
    }
}

void absolute_percentage_errors_neon(const double* a, const double* f, double* out,
                                     std::size_t n) noexcept {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t av = vld1q_f64(a + i);
        vst1q_f64(out + i, vdivq_f64(vabdq_f64(av, vld1q_f64(f + i)), vabsq_f64(av)));
    }
    for (; i < n; ++i) {
        out[i] = std::fabs(a[i] - f[i]) / std::fabs(a[i]);
    }
}

void symmetric_percentage_errors_neon(const double* a, const double* f, double* out,
                                      std::size_t n) noexcept {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t av = vld1q_f64(a + i);
        const float64x2_t fv = vld1q_f64(f + i);
        const float64x2_t num = vmulq_n_f64(vabdq_f64(av, fv), 2.0);
        vst1q_f64(out + i, vdivq_f64(num, vaddq_f64(vabsq_f64(av), vabsq_f64(fv))));
    }
    for (; i < n; ++i) {
        out[i] = 2.0 * std::fabs(a[i] - f[i]) / (std::fabs(a[i]) + std::fabs(f[i]));
    }
}

constexpr KernelTable kNeon{
    sum_neon,
    sum_squares_neon,
    sum_abs_adjacent_products_neon,
    dot_neon,
    gather_sum_neon,
    squared_errors_neon,
    absolute_errors_neon,
    absolute_percentage_errors_neon,
    symmetric_percentage_errors_neon,
};

}  // namespace

const KernelTable& neon_kernels() noexcept { return kNeon; }

}  // namespace rvkit::simd::detail
