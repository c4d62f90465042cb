#include "rvkit/models/optimizer.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace rvkit::models;

TEST_SUITE("optimizer") {

TEST_CASE("nelder-mead finds the Rosenbrock minimum") {
    const Objective rosen = [](std::span<const double> x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    SimplexOptions o;
    o.max_iterations = 5000;
    const auto r = minimize(rosen, {-1.2, 1.0}, o);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("non-finite values act as walls") {
    const Objective f = [](std::span<const double> x) {
        return x[0] < 0.5 ? std::nan("") : (x[0] - 1.0) * (x[0] - 1.0);
    };
    const auto r = nelder_mead(f, {2.0}, SimplexOptions{});
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("same seed gives the same result") {
    const Objective f = [](std::span<const double> x) {
        return std::sin(3 * x[0]) + x[0] * x[0] + std::cos(2 * x[1]) + 0.5 * x[1] * x[1];
    };
    const auto a = minimize(f, {1.0, 1.0}, SimplexOptions{});
    const auto b = minimize(f, {1.0, 1.0}, SimplexOptions{});
    CHECK(a.x == b.x);
    CHECK(a.value == b.value);
}

TEST_CASE("newton polish sharpens a quadratic") {
    const Objective f = [](std::span<const double> x) {
        return 3.0 * (x[0] - 0.2) * (x[0] - 0.2) + (x[0] - 0.2) * (x[1] + 1.0) + 2.0 * (x[1] + 1.0) * (x[1] + 1.0);
    };
    SimplexResult start;
    start.x = {0.5, -0.5};
    start.value = f(start.x);
    start.converged = true;
    const auto r = newton_polish(f, start);
    CHECK(r.value <= start.value);
    CHECK(r.x[0] == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(r.x[1] == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("stationarity maps") {
    for (std::size_t p = 1; p <= 3; ++p) {
        std::vector<double> u(p);
        for (std::size_t i = 0; i < p; ++i) u[i] = 0.7 * static_cast<double>(i + 1) - 1.1;
        const auto c = stationary_from_unconstrained(u);
        CHECK(is_stationary(c));
        const auto back = unconstrained_from_stationary(c);
        for (std::size_t i = 0; i < p; ++i) CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-10));
    }
    CHECK(is_stationary(std::vector{0.5}));
    CHECK(!is_stationary(std::vector{1.0}));
    CHECK(!is_stationary(std::vector{0.6, 0.5}));
    CHECK(is_stationary(std::vector{1.2, -0.3}));
}

}
