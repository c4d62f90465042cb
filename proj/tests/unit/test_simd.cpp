#include "rvkit/simd/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <random>
#include <vector>

using namespace rvkit::simd;

namespace {

std::vector<Isa> vector_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::avx2, Isa::neon})
        if (isa_supported(isa)) out.push_back(isa);
    return out;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

void check_close(double a, double b, double scale) {
    CHECK(std::fabs(a - b) <= 1e-13 * std::max(1.0, scale));
}

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar is always available and selectable") {
    CHECK(isa_supported(Isa::scalar));
    ScopedIsa guard(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
}

TEST_CASE("unsupported isa is rejected") {
    for (Isa isa : {Isa::avx2, Isa::neon})
        if (!isa_supported(isa)) CHECK_THROWS_AS(set_active_isa(isa), std::invalid_argument);
}

TEST_CASE("scalar kernels match brute force") {
    ScopedIsa guard(Isa::scalar);
    std::mt19937_64 rng(7);
    const auto a = random_vector(37, rng);
    const auto b = random_vector(37, rng);
    double s = 0, ss = 0, adj = 0, dp = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i];
        ss += a[i] * a[i];
        dp += a[i] * b[i];
        if (i > 0) adj += std::fabs(a[i]) * std::fabs(a[i - 1]);
    }
    CHECK(sum(a) == doctest::Approx(s).epsilon(1e-14));
    CHECK(sum_squares(a) == doctest::Approx(ss).epsilon(1e-14));
    CHECK(sum_abs_adjacent_products(a) == doctest::Approx(adj).epsilon(1e-14));
    CHECK(dot(a, b) == doctest::Approx(dp).epsilon(1e-14));
    const std::vector<std::size_t> idx{0, 5, 5, 36, 2};
    CHECK(gather_sum(a, idx) == doctest::Approx(a[0] + 2 * a[5] + a[36] + a[2]).epsilon(1e-14));
}

TEST_CASE("vector kernels agree with the scalar reference") {
    const auto isas = vector_isas();
    if (isas.empty()) {
        MESSAGE("no vector ISA on this machine");
        return;
    }
    std::mt19937_64 rng(11);
    for (Isa isa : isas) {
        CAPTURE(to_string(isa));
        for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 33u, 78u, 1001u}) {
            CAPTURE(n);
            const auto a = random_vector(n, rng);
            const auto b = random_vector(n, rng);
            const auto pos = random_vector(n, rng, 0.5, 3.0);
            const auto pos2 = random_vector(n, rng, 0.5, 3.0);
            std::uniform_int_distribution<std::size_t> pick(0, n == 0 ? 0 : n - 1);
            std::vector<std::size_t> idx(n == 0 ? 0 : 2 * n + 3);
            for (auto& i : idx) i = pick(rng);

            double ref[5];
            std::vector<double> ref_out[4];
            {
                ScopedIsa guard(Isa::scalar);
                ref[0] = sum(a);
                ref[1] = sum_squares(a);
                ref[2] = sum_abs_adjacent_products(a);
                ref[3] = dot(a, b);
                ref[4] = n == 0 ? 0.0 : gather_sum(a, idx);
                for (auto& v : ref_out) v.assign(n, 0.0);
                squared_errors(a, b, ref_out[0]);
                absolute_errors(a, b, ref_out[1]);
                absolute_percentage_errors(pos, pos2, ref_out[2]);
                symmetric_percentage_errors(pos, pos2, ref_out[3]);
            }
            ScopedIsa guard(isa);
            check_close(sum(a), ref[0], static_cast<double>(n));
            check_close(sum_squares(a), ref[1], static_cast<double>(n));
            check_close(sum_abs_adjacent_products(a), ref[2], static_cast<double>(n));
            check_close(dot(a, b), ref[3], static_cast<double>(n));
            if (n > 0) check_close(gather_sum(a, idx), ref[4], static_cast<double>(idx.size()));
            std::vector<double> out(n);
            squared_errors(a, b, out);
            for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(ref_out[0][i]).epsilon(1e-15));
            absolute_errors(a, b, out);
            for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == ref_out[1][i]);
            absolute_percentage_errors(pos, pos2, out);
            for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(ref_out[2][i]).epsilon(1e-15));
            symmetric_percentage_errors(pos, pos2, out);
            for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(ref_out[3][i]).epsilon(1e-15));
        }
    }
}

TEST_CASE("vector reductions are deterministic") {
    std::mt19937_64 rng(3);
    const auto a = random_vector(513, rng);
    for (Isa isa : vector_isas()) {
        ScopedIsa guard(isa);
        CHECK(sum_squares(a) == sum_squares(a));
        CHECK(dot(a, a) == dot(a, a));
    }
}

}
