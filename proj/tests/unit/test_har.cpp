#include "rvkit/errors.hpp"
#include "rvkit/models/har.hpp"
#include "support/sim.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

using namespace rvkit;
using namespace rvkit::models;

TEST_SUITE("har") {

TEST_CASE("regressors") {
    std::vector<double> c(40, 0.3);
    const auto rc = build_har_regressors(c, 30);
    CHECK(rc.daily == doctest::Approx(0.3));
    CHECK(rc.weekly == doctest::Approx(0.3));
    CHECK(rc.monthly == doctest::Approx(0.3));

    std::vector<double> x(30);
    std::iota(x.begin(), x.end(), 1.0);
    // Forecasting the 30th value uses values 1..29.
    const auto r = build_har_regressors(x, 29);
    CHECK(r.daily == 29.0);
    CHECK(r.weekly == 27.0);
    CHECK(r.monthly == 18.5);
    CHECK_NOTHROW((void)build_har_regressors(x, 22));
    CHECK_THROWS_WITH_AS((void)build_har_regressors(x, 21), doctest::Contains("22"), DomainError);
    CHECK_THROWS_AS((void)build_har_regressors(x, 31), DomainError);
    const auto s = testing::make_series("X", x);
    CHECK(build_har_regressors(s, 29).monthly == 18.5);
}

TEST_CASE("recovery matches a normal-equations oracle") {
    const auto x = testing::simulate_har(5000, 42);
    const auto fit = fit_har(x, IndexRange{0, x.size()});
    const auto oracle = testing::ols_normal_equations(testing::har_design(x, 22),
                                                      std::vector<double>(x.begin() + 22, x.end()));
    CHECK(fit.params.omega == doctest::Approx(oracle[0]).epsilon(1e-8));
    CHECK(fit.params.beta_d == doctest::Approx(oracle[1]).epsilon(1e-8));
    CHECK(fit.params.beta_w == doctest::Approx(oracle[2]).epsilon(1e-8));
    CHECK(fit.params.beta_m == doctest::Approx(oracle[3]).epsilon(1e-8));
    CHECK(std::fabs(fit.params.omega - 0.1) < 0.1);
    CHECK(std::fabs(fit.params.beta_d - 0.4) < 0.1);
    CHECK(std::fabs(fit.params.beta_w - 0.3) < 0.1);
    CHECK(std::fabs(fit.params.beta_m - 0.2) < 0.1);
    CHECK(std::sqrt(fit.params.resid_var) == doctest::Approx(0.05).epsilon(0.05));
    CHECK(fit.diagnostics.n_obs == 5000 - 22);
}

TEST_CASE("residuals are orthogonal to regressors") {
    const auto x = testing::simulate_har(800, 9);
    const IndexRange range{100, 700};
    const auto p = fit_har(x, range).params;
    double sums[4] = {0, 0, 0, 0};
    for (std::size_t t = range.begin + 22; t < range.end; ++t) {
        const auto r = build_har_regressors(x, t);
        const double e = x[t] - forecast_har(p, r);
        sums[0] += e;
        sums[1] += e * r.daily;
        sums[2] += e * r.weekly;
        sums[3] += e * r.monthly;
    }
    for (double s : sums) CHECK(std::fabs(s) < 1e-8);
}

TEST_CASE("forecast identities") {
    HarCoefficients p;
    p.beta_d = 1.0;
    CHECK(forecast_har(p, {0.5, 9.0, 9.0}) == 0.5);
    HarCoefficients q;
    q.omega = 0.2;
    CHECK(forecast_har(q, {0.5, 0.7, 0.9}) == 0.2);
    CharParams c;
    c.beta_d = 1.0;
    CHECK(forecast_char(c, {0.3, 1.0, 2.0}) == 0.3);
}

TEST_CASE("forecast error sd at the truth is close to the noise sd") {
    const auto x = testing::simulate_har(5000, 5);
    const auto p = fit_har(x, IndexRange{0, 3000}).params;
    double ss = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 3000; t < x.size(); ++t, ++n) {
        const double e = x[t] - forecast_har(p, build_har_regressors(x, t));
        ss += e * e;
    }
    CHECK(std::sqrt(ss / static_cast<double>(n)) == doctest::Approx(0.05).epsilon(0.1));
}

TEST_CASE("collinear designs") {
    std::vector<double> c(200, 1e-4);
    CHECK_THROWS_WITH_AS((void)fit_har(c, IndexRange{0, c.size()}), doctest::Contains("collinear"),
                         EstimationError);
    CHECK_THROWS_AS((void)fit_har(c, IndexRange{0, 60}), DomainError);
}

TEST_CASE("char") {
    const auto x = testing::simulate_har(3000, 8);
    std::vector<RvObservation> obs;
    const auto days = testing::business_days(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) obs.push_back({days[i], 1.0, x[i], x[i]});
    const RvSeries s("X", obs);
    const auto h = fit_har(s, IndexRange{0, s.size()});
    const auto c = fit_char(s, IndexRange{0, s.size()});
    CHECK(c.params.target == CharTarget::rv);
    CHECK(c.params.beta_d == doctest::Approx(h.params.beta_d).epsilon(1e-10));
    CHECK(c.params.omega == doctest::Approx(h.params.omega).epsilon(1e-10));

    // Target rv on bpv regressors when bpv differs from rv.
    const auto s2 = testing::make_series("Y", x, 4);
    const auto c2 = fit_char(s2, IndexRange{0, s2.size()});
    const auto rv = s2.rv_values();
    const auto bpv = s2.bpv_values();
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 22; t < bpv.size(); ++t) {
        const auto r = build_har_regressors(bpv, t);
        rows.push_back({1.0, r.daily, r.weekly, r.monthly});
    }
    const auto oracle = testing::ols_normal_equations(rows, std::vector<double>(rv.begin() + 22, rv.end()));
    CHECK(c2.params.omega == doctest::Approx(oracle[0]).epsilon(1e-8));
    CHECK(c2.params.beta_m == doctest::Approx(oracle[3]).epsilon(1e-8));
    const auto c3 = fit_char(s2, IndexRange{0, s2.size()}, CharTarget::bpv);
    CHECK(c3.params.target == CharTarget::bpv);

    std::vector<RvObservation> flat;
    for (std::size_t i = 0; i < 200; ++i) flat.push_back({days[i], 1.0, x[i], 0.5});
    CHECK_THROWS_AS((void)fit_char(RvSeries("Z", flat), IndexRange{0, 200}), EstimationError);
    std::vector<RvObservation> gap = flat;
    gap[50].bpv.reset();
    CHECK_THROWS_AS((void)fit_char(RvSeries("Z", gap), IndexRange{0, 200}), DomainError);
}

}
