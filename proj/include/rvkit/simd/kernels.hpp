#pragma once

// Data-parallel inner loops used across the toolkit.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is
// chosen once at startup from the CPU's capabilities and can be overridden
// with set_active_isa() or the RVKIT_ISA environment variable
// (scalar|avx2|neon). Reductions in the vector variants use a fixed lane
// order, so results are deterministic for a given ISA and input length but
// may differ from the scalar reference in the last few ulps.

#include <cstddef>
#include <span>
#include <string_view>

namespace rvkit::simd {

enum class Isa { scalar, avx2, neon };

[[nodiscard]] std::string_view to_string(Isa isa) noexcept;

/// Best ISA the running CPU supports (and this build was compiled with).
[[nodiscard]] Isa detected_isa() noexcept;
[[nodiscard]] bool isa_supported(Isa isa) noexcept;
[[nodiscard]] Isa active_isa() noexcept;

/// Throws std::invalid_argument if the ISA is not supported here.
void set_active_isa(Isa isa);

/// Restores the previous ISA on destruction.
class ScopedIsa {
public:
    explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
    ~ScopedIsa() { set_active_isa(previous_); }
    ScopedIsa(const ScopedIsa&) = delete;
    ScopedIsa& operator=(const ScopedIsa&) = delete;

private:
    Isa previous_;
};

[[nodiscard]] double sum(std::span<const double> x) noexcept;
[[nodiscard]] double sum_squares(std::span<const double> x) noexcept;

/// sum_{i>=1} |x[i]| * |x[i-1]|
[[nodiscard]] double sum_abs_adjacent_products(std::span<const double> x) noexcept;

/// Inner product over min(a.size(), b.size()) elements.
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b) noexcept;

/// sum_k values[index[k]]; indices must be in range.
[[nodiscard]] double gather_sum(std::span<const double> values,
                                std::span<const std::size_t> index) noexcept;

// Elementwise forecast-error contributions. `out` must be at least as long as
// `actual`; `forecast` likewise.
void squared_errors(std::span<const double> actual, std::span<const double> forecast,
                    std::span<double> out) noexcept;
void absolute_errors(std::span<const double> actual, std::span<const double> forecast,
                     std::span<double> out) noexcept;
/// |a - f| / |a|
void absolute_percentage_errors(std::span<const double> actual,
                                std::span<const double> forecast,
                                std::span<double> out) noexcept;
/// 2 |a - f| / (|a| + |f|)
void symmetric_percentage_errors(std::span<const double> actual,
                                 std::span<const double> forecast,
                                 std::span<double> out) noexcept;

namespace detail {

struct KernelTable {
    double (*sum)(const double*, std::size_t) noexcept;
    double (*sum_squares)(const double*, std::size_t) noexcept;
    double (*sum_abs_adjacent_products)(const double*, std::size_t) noexcept;
    double (*dot)(const double*, const double*, std::size_t) noexcept;
    double (*gather_sum)(const double*, const std::size_t*, std::size_t) noexcept;
    void (*squared_errors)(const double*, const double*, double*, std::size_t) noexcept;
    void (*absolute_errors)(const double*, const double*, double*, std::size_t) noexcept;
    void (*absolute_percentage_errors)(const double*, const double*, double*,
                                       std::size_t) noexcept;
    void (*symmetric_percentage_errors)(const double*, const double*, double*,
                                        std::size_t) noexcept;
};

const KernelTable& scalar_kernels() noexcept;
#if defined(RVKIT_HAVE_AVX2_KERNELS)
const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(RVKIT_HAVE_NEON_KERNELS)
const KernelTable& neon_kernels() noexcept;
#endif

}  // namespace detail

}  // namespace rvkit::simd
