#include "rvkit/simd/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace rvkit::simd {

namespace {

bool cpu_has(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(RVKIT_HAVE_AVX2_KERNELS)
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Isa::neon:
#if defined(RVKIT_HAVE_NEON_KERNELS)
        return true;
#else
        return false;
#endif
    }
    return false;
}

const detail::KernelTable& table_for(Isa isa) noexcept {
    switch (isa) {
#if defined(RVKIT_HAVE_AVX2_KERNELS)
    case Isa::avx2:
        return detail::avx2_kernels();
#endif
#if defined(RVKIT_HAVE_NEON_KERNELS)
    case Isa::neon:
        return detail::neon_kernels();
#endif
    default:
        return detail::scalar_kernels();
    }
}

Isa initial_isa() noexcept {
    if (const char* env = std::getenv("RVKIT_ISA")) {
        const std::string_view name{env};
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (name == to_string(isa) && cpu_has(isa)) {
                return isa;
            }
        }
    }
    return detected_isa();
}

struct ActiveState {
    std::atomic<Isa> isa{initial_isa()};
    std::atomic<const detail::KernelTable*> table{&table_for(isa.load())};
};

ActiveState& state() noexcept {
    static ActiveState s;
    return s;
}

const detail::KernelTable& active() noexcept {
    return *state().table.load(std::memory_order_acquire);
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar:
        return "scalar";
    case Isa::avx2:
        return "avx2";
    case Isa::neon:
        return "neon";
    }
    return "unknown";
}

Isa detected_isa() noexcept {
    if (cpu_has(Isa::avx2)) {
        return Isa::avx2;
    }
    if (cpu_has(Isa::neon)) {
        return Isa::neon;
    }
    return Isa::scalar;
}

bool isa_supported(Isa isa) noexcept { return cpu_has(isa); }

Isa active_isa() noexcept { return state().isa.load(); }

void set_active_isa(Isa isa) {
    if (!cpu_has(isa)) {
        throw std::invalid_argument("ISA not supported on this machine: " +
                                    std::string{to_string(isa)});
    }
    state().isa.store(isa);
    state().table.store(&table_for(isa), std::memory_order_release);
}

double sum(std::span<const double> x) noexcept { return active().sum(x.data(), x.size()); }

double sum_squares(std::span<const double> x) noexcept {
    return active().sum_squares(x.data(), x.size());
}

double sum_abs_adjacent_products(std::span<const double> x) noexcept {
    return active().sum_abs_adjacent_products(x.data(), x.size());
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), std::min(a.size(), b.size()));
}

double gather_sum(std::span<const double> values, std::span<const std::size_t> index) noexcept {
    return active().gather_sum(values.data(), index.data(), index.size());
}

void squared_errors(std::span<const double> actual, std::span<const double> forecast,
                    std::span<double> out) noexcept {
    active().squared_errors(actual.data(), forecast.data(), out.data(), actual.size());
}

void absolute_errors(std::span<const double> actual, std::span<const double> forecast,
                     std::span<double> out) noexcept {
    active().absolute_errors(actual.data(), forecast.data(), out.data(), actual.size());
}

void absolute_percentage_errors(std::span<const double> actual,
                                std::span<const double> forecast,
                                std::span<double> out) noexcept {
    active().absolute_percentage_errors(actual.data(), forecast.data(), out.data(),
                                        actual.size());
}

void symmetric_percentage_errors(std::span<const double> actual,
                                 std::span<const double> forecast,
                                 std::span<double> out) noexcept {
    active().symmetric_percentage_errors(actual.data(), forecast.data(), out.data(),
                                         actual.size());
}

}  // namespace rvkit::simd
