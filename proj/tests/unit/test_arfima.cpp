#include "rvkit/errors.hpp"
#include "rvkit/models/arfima.hpp"
#include "support/sim.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace rvkit;
using namespace rvkit::models;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> x(n);
    for (double& v : x) v = z(rng);
    return x;
}

double gamma_weight(std::size_t k, double d) {
    // Gamma(k - d) / (Gamma(k + 1) Gamma(-d)), signs tracked with tgamma.
    return std::tgamma(static_cast<double>(k) - d) / (std::tgamma(static_cast<double>(k) + 1.0) * std::tgamma(-d));
}

}  // namespace

TEST_SUITE("arfima") {

TEST_CASE("weights match the Gamma-function formula") {
    const auto w = frac_diff_weights(0.5, 4);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(w[2] == doctest::Approx(-0.125).epsilon(1e-15));
    CHECK(w[3] == doctest::Approx(-0.0625).epsilon(1e-15));
    for (double d : {0.1, 0.3, 0.45, 0.7, -0.3}) {
        const auto ww = frac_diff_weights(d, 60);
        for (std::size_t k = 1; k < 60; ++k) {
            CAPTURE(d);
            CAPTURE(k);
            CHECK(ww[k] == doctest::Approx(gamma_weight(k, d)).epsilon(1e-10));
        }
    }
    // For 0 < d < 1 the weights after the first are negative and shrink in size.
    const auto m = frac_diff_weights(0.4, 200);
    for (std::size_t k = 2; k < m.size(); ++k) {
        CHECK(m[k] < 0.0);
        CHECK(std::fabs(m[k]) < std::fabs(m[k - 1]));
    }
}

TEST_CASE("d = 0 and d = 1") {
    const auto x = noise(50, 1);
    CHECK(frac_diff(x, 0.0, x.size()) == x);
    CHECK(frac_integrate(x, 0.0, x.size()) == x);
    const auto dx = frac_diff(x, 1.0, x.size());
    CHECK(dx[0] == x[0]);
    for (std::size_t t = 1; t < x.size(); ++t) CHECK(dx[t] == doctest::Approx(x[t] - x[t - 1]).epsilon(1e-14));
    const auto cx = frac_integrate(x, 1.0, x.size());
    double s = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        s += x[t];
        CHECK(cx[t] == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("round trip") {
    const auto x = noise(2000, 2);
    const auto back = frac_integrate(frac_diff(x, 0.4, x.size()), 0.4, x.size());
    double worst = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) worst = std::max(worst, std::fabs(back[t] - x[t]));
    CHECK(worst < 1e-8);
}

TEST_CASE("argument checks") {
    const auto x = noise(10, 3);
    CHECK_THROWS_AS((void)frac_diff(x, 0.4, 0), DomainError);
    CHECK_THROWS_AS((void)frac_diff(x, 1.5, 10), DomainError);
    CHECK_THROWS_AS((void)fit_arfima(noise(100, 1), 0, 0), DomainError);
    CHECK_THROWS_AS((void)fit_arfima(noise(300, 1), 3, 0), DomainError);
}

TEST_CASE("white noise gives small d") {
    const auto x = noise(3000, 4);
    const auto f = fit_arfima(x, 0, 0);
    CHECK(f.params.d < 0.08);
    CHECK(f.diagnostics.converged);
}

TEST_CASE("ARFIMA(0, 0.4, 0) recovery") {
    const auto x = testing::simulate_arfima(3000, 0.4, 0.0, 17);
    const auto f = fit_arfima(x, 0, 0);
    CHECK(f.params.d >= 0.32);
    CHECK(f.params.d <= 0.48);
    CHECK(f.params.innovation_var == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("ARFIMA(1, 0.3, 0) recovery") {
    const auto x = testing::simulate_arfima(4000, 0.3, 0.5, 23);
    const auto f = fit_arfima(x, 1, 0);
    REQUIRE(f.params.ar.size() == 1);
    CHECK(std::fabs(f.params.d - 0.3) < 0.1);
    CHECK(std::fabs(f.params.ar[0] - 0.5) < 0.1);
}

TEST_CASE("forecast identities") {
    ArfimaParams wn;
    wn.mu = 2.5;
    const std::vector<double> h{1.0, 4.0, -3.0};
    CHECK(forecast_arfima(wn, h) == doctest::Approx(2.5));
    ArfimaParams rw;
    rw.d = 1.0;
    CHECK(forecast_arfima(rw, h) == doctest::Approx(-3.0).epsilon(1e-12));
    ArfimaParams ar1;
    ar1.p = 1;
    ar1.ar = {0.5};
    CHECK_THROWS_AS((void)forecast_arfima(ar1, std::vector<double>{}), DomainError);
}

TEST_CASE("filter matches batch forecasts") {
    const auto x = testing::simulate_arfima(400, 0.3, 0.5, 5);
    ArfimaParams p;
    p.d = 0.3;
    p.p = 1;
    p.q = 1;
    p.ar = {0.4};
    p.ma = {0.2};
    p.mu = 0.1;
    ArfimaFilter filter(p);
    for (std::size_t t = 0; t < x.size(); ++t) {
        filter.push(x[t]);
        if (t % 37 == 0 || t + 1 == x.size()) {
            const double batch = forecast_arfima(p, std::span<const double>(x.data(), t + 1));
            CHECK(filter.forecast() == doctest::Approx(batch).epsilon(1e-12));
        }
    }
    CHECK(filter.size() == x.size());
}

TEST_CASE("fitted model beats the last-value forecast out of sample") {
    const auto x = testing::simulate_arfima(4000, 0.4, 0.0, 31);
    const auto f = fit_arfima(std::span<const double>(x.data(), 3000), 0, 0);
    ArfimaFilter filter(f.params);
    for (std::size_t t = 0; t < 3000; ++t) filter.push(x[t]);
    double model = 0.0, naive = 0.0;
    for (std::size_t t = 3000; t < 4000; ++t) {
        const double e = x[t] - filter.forecast();
        const double n = x[t] - x[t - 1];
        model += e * e;
        naive += n * n;
        filter.push(x[t]);
    }
    CHECK(model < naive);
}

TEST_CASE("order selection stays in the grid") {
    const auto x = testing::simulate_arfima(600, 0.3, 0.5, 2);
    const auto o = select_arfima_order(x);
    CHECK(o.p >= 0);
    CHECK(o.p <= 2);
    CHECK(o.q >= 0);
    CHECK(o.q <= 2);
}

}
