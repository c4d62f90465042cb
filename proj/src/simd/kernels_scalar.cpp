#include "rvkit/simd/kernels.hpp"

#include <cmath>

namespace rvkit::simd::detail {

namespace {

double sum_scalar(const double* x, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i];
    }
    return acc;
}

double sum_squares_scalar(const double* x, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i] * x[i];
    }
    return acc;
}

double sum_abs_adjacent_products_scalar(const double* x, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        acc += std::fabs(x[i]) * std::fabs(x[i - 1]);
    }
    return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double gather_sum_scalar(const double* values, const std::size_t* index, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += values[index[i]];
    }
    return acc;
}

void squared_errors_scalar(const double* a, const double* f, double* out, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        const double e = a[i] - f[i];
        out[i] = e * e;
    }
}

void absolute_errors_scalar(const double* a, const double* f, double* out, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::fabs(a[i] - f[i]);
    }
}

void absolute_percentage_errors_scalar(const double* a, const double* f, double* out,
                                       std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::fabs(a[i] - f[i]) / std::fabs(a[i]);
    }
}

void symmetric_percentage_errors_scalar(const double* a, const double* f, double* out,
                                        std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = 2.0 * std::fabs(a[i] - f[i]) / (std::fabs(a[i]) + std::fabs(f[i]));
    }
}

constexpr KernelTable kScalar{
    sum_scalar,
    sum_squares_scalar,
    sum_abs_adjacent_products_scalar,
    dot_scalar,
    gather_sum_scalar,
    squared_errors_scalar,
    absolute_errors_scalar,
    absolute_percentage_errors_scalar,
    symmetric_percentage_errors_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace rvkit::simd::detail
