#include "rvkit/errors.hpp"
#include "rvkit/protocol.hpp"
#include "support/lookahead.hpp"
#include "support/sim.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace rvkit;
using namespace rvkit::eval;

TEST_SUITE("protocol") {

TEST_CASE("default breakpoints on 1000 observations") {
    const auto plan = make_split_plan(1000, default_breakpoints());
    REQUIRE(plan.segments.size() == 3);
    const std::size_t ends[] = {500, 700, 900};
    const std::size_t tests[] = {700, 900, 1000};
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(plan.segments[k].fit_start == 1);
        CHECK(plan.segments[k].fit_end == ends[k]);
        CHECK(plan.segments[k].test_start == ends[k] + 1);
        CHECK(plan.segments[k].test_end == tests[k]);
    }
    CHECK(plan.segments[0].train_size == 400);
    CHECK(plan.segments[0].val_size == 100);
    CHECK(plan.segments[1].block_start == 501);
    CHECK(plan.segments[1].train_size == 160);
    CHECK(plan.segments[1].val_size == 40);
    CHECK(plan.segments[2].train_size == 160);
    CHECK(plan.forecast_count() == 500);
}

TEST_CASE("forecast count is n minus the first fit window") {
    for (std::size_t n : {100u, 101u, 333u, 999u, 5735u}) {
        const auto plan = make_split_plan(n, default_breakpoints());
        CHECK(plan.forecast_count() == n - n / 2);
    }
    const auto small = make_split_plan(100, default_breakpoints());
    CHECK(small.segments[0].fit_end == 50);
    CHECK(small.segments[1].fit_end == 70);
    CHECK(small.segments[2].fit_end == 90);
}

TEST_CASE("bad breakpoints") {
    const std::vector<double> decreasing{0.5, 0.4, 1.0};
    CHECK_THROWS_AS((void)make_split_plan(1000, decreasing), DomainError);
    const std::vector<double> open_end{0.5, 0.9};
    CHECK_THROWS_AS((void)make_split_plan(1000, open_end), DomainError);
    const std::vector<double> tiny{0.01, 1.0};
    CHECK_THROWS_AS((void)make_split_plan(1000, tiny), DomainError);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS((void)make_split_plan(1000, one), DomainError);
    CHECK_THROWS_AS((void)make_split_plan(99, default_breakpoints()), DomainError);
}

TEST_CASE("rolling windows keep their width") {
    const auto plan = make_split_plan(1000, default_breakpoints(), WindowScheme::rolling);
    for (const auto& s : plan.segments) CHECK(s.fit_length() == 500);
    CHECK(plan.segments[2].fit_start == 401);
}

TEST_CASE("forecast sets") {
    ForecastSet set("HAR", "AEX");
    set.insert(TradingDay(2020, 1, 2), 1e-4);
    CHECK_THROWS_AS(set.insert(TradingDay(2020, 1, 2), 2e-4), DomainError);
    CHECK_THROWS_AS(set.insert(TradingDay(2020, 1, 3), 0.0), DomainError);
    CHECK_THROWS_AS(set.insert(TradingDay(2020, 1, 3), std::nan("")), DomainError);
    CHECK(set.at(TradingDay(2020, 1, 2)) == std::optional<double>(1e-4));
    CHECK(!set.at(TradingDay(2020, 1, 3)));
}

TEST_CASE("model ids and kinds") {
    ModelSpec s;
    CHECK(s.model_id() == "HAR");
    s.log_space = true;
    CHECK(s.model_id() == "HAR_log");
    s.kind = ModelKind::char_har;
    CHECK(s.model_id() == "CHAR_log");
    s.kind = ModelKind::arfima;
    s.log_space = false;
    CHECK(s.model_id() == "ARFIMA");
    s.kind = ModelKind::rgarch;
    CHECK(s.model_id() == "RGARCH");
    CHECK(parse_model_kind("char") == ModelKind::char_har);
    CHECK_THROWS_AS((void)parse_model_kind("lstm"), DomainError);
}

TEST_CASE("HAR on constant plus noise forecasts the mean") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z(0.0, 1e-5);
    std::vector<double> rv(600);
    for (double& v : rv) v = 1e-4 + z(rng);
    const auto series = testing::make_series("X", rv);
    const auto plan = make_split_plan(rv.size(), default_breakpoints());
    const auto result = run_backtest(series, ModelSpec{}, plan);
    CHECK(result.clamped == 0);
    CHECK(result.forecasts.size() == plan.forecast_count());
    CHECK(result.fits.size() == 3);
    for (const auto& [day, f] : result.forecasts.entries()) CHECK(std::fabs(f - 1e-4) < 1e-5);
}

TEST_CASE("forecasts are dated on the test days") {
    const auto series = testing::make_series("X", testing::lognormal_har_rv(300, 2));
    const auto plan = make_split_plan(series.size(), default_breakpoints());
    const auto result = run_backtest(series, ModelSpec{}, plan);
    REQUIRE(result.forecasts.size() == 150);
    CHECK(result.forecasts.entries().begin()->first == series[150].date);
    CHECK(result.forecasts.entries().rbegin()->first == series[299].date);
}

TEST_CASE("no lookahead for any model") {
    const auto series = testing::make_series("X", testing::lognormal_har_rv(500, 3), 3);
    const auto plan = make_split_plan(series.size(), default_breakpoints());
    for (const auto& spec : testing::all_model_specs()) {
        for (std::size_t cut : {260u, 400u}) {
            CAPTURE(spec.model_id());
            CAPTURE(cut);
            CHECK(testing::lookahead_violations(series, spec, plan, cut) == 0);
        }
    }
}

TEST_CASE("backtests are deterministic") {
    const auto series = testing::make_series("X", testing::lognormal_har_rv(400, 4), 4);
    const auto plan = make_split_plan(series.size(), default_breakpoints());
    for (const auto& spec : testing::all_model_specs()) {
        const auto a = run_backtest(series, spec, plan).forecasts.entries();
        const auto b = run_backtest(series, spec, plan).forecasts.entries();
        CHECK(a == b);
    }
}

TEST_CASE("log models need positive rv in the data") {
    auto rv = testing::lognormal_har_rv(300, 5);
    rv[40] = 0.0;
    const auto series = testing::make_series("X", rv);
    const auto plan = make_split_plan(series.size(), default_breakpoints());
    ModelSpec s;
    s.log_space = true;
    CHECK_THROWS_AS((void)run_backtest(series, s, plan), DomainError);
    ModelSpec bad;
    bad.kind = ModelKind::rgarch;
    bad.log_space = true;
    CHECK_THROWS_AS((void)run_backtest(testing::make_series("X", testing::lognormal_har_rv(300, 5)), bad, plan),
                    DomainError);
}

TEST_CASE("fit failures name the segment") {
    std::vector<double> rv(300, 1e-4);
    const auto series = testing::make_series("X", rv);
    const auto plan = make_split_plan(series.size(), default_breakpoints());
    CHECK_THROWS_WITH_AS((void)run_backtest(series, ModelSpec{}, plan), doctest::Contains("segment 1"),
                         EstimationError);
}

TEST_CASE("negative linear forecasts are clamped") {
    // A crash to near zero after a high regime pushes linear HAR below zero.
    std::vector<double> rv(400);
    for (std::size_t i = 0; i < rv.size(); ++i) rv[i] = (i / 7) % 2 == 0 ? 1.0 : 1e-6;
    for (std::size_t i = 0; i < rv.size(); ++i) rv[i] *= 1.0 + 0.01 * static_cast<double>(i % 3);
    const auto series = testing::make_series("X", rv);
    const auto plan = make_split_plan(series.size(), default_breakpoints());
    ModelSpec s;
    s.floor = 1e-3;
    const auto result = run_backtest(series, s, plan);
    for (const auto& [day, f] : result.forecasts.entries()) CHECK(f >= 1e-3);
    CHECK(result.clamped > 0);
}

TEST_CASE("alignment") {
    const auto series = testing::make_series("AEX", testing::lognormal_har_rv(100, 6));
    ForecastSet a("A", "AEX"), b("B", "AEX");
    for (std::size_t i = 10; i < 90; ++i) a.insert(series[i].date, 1e-4);
    for (std::size_t i = 10; i < 90; ++i) b.insert(series[i].date, 2e-4);
    std::vector<ForecastSet> same{a, b};
    const auto panel = align(series, same);
    CHECK(panel.size() == 80);
    CHECK(panel.model_ids() == std::vector<std::string>{"A", "B"});
    CHECK(panel.actuals[0] == series[10].rv);

    ForecastSet c("C", "AEX");
    for (std::size_t i = 11; i < 91; ++i) c.insert(series[i].date, 3e-4);
    std::vector<ForecastSet> offset{a, c};
    CHECK(align(series, offset).size() == 79);

    DateWindow w{series[20].date, series[59].date};
    CHECK(align(series, same, w).size() == 40);
    DateWindow narrow{series[20].date, series[29].date};
    CHECK_THROWS_AS((void)align(series, same, narrow), DomainError);

    std::vector<ForecastSet> dup{a, a};
    CHECK_THROWS_AS((void)align(series, dup), DomainError);
    ForecastSet far("D", "AEX");
    far.insert(TradingDay(1990, 1, 2), 1.0);
    std::vector<ForecastSet> disjoint{far};
    CHECK_THROWS_AS((void)align(series, disjoint), DomainError);
    ForecastSet other("E", "FTSE");
    other.insert(series[10].date, 1.0);
    std::vector<ForecastSet> mismatch{a, other};
    CHECK_THROWS_AS((void)align(series, mismatch), DomainError);
    CHECK_THROWS_AS((void)align(to_log(series), same), DomainError);
    CHECK_THROWS_AS((void)panel.forecast("Z"), DomainError);
}

}
