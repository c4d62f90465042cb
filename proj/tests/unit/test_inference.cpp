#include "rvkit/errors.hpp"
#include "rvkit/inference.hpp"
#include "support/sim.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

using namespace rvkit;
using namespace rvkit::stats;
using rvkit::loss::LossKind;
using rvkit::loss::LossSeries;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, sd);
    std::vector<double> v(n);
    for (double& x : v) x = z(rng);
    return v;
}

LossSeries series(std::string id, std::vector<double> values) {
    LossSeries s;
    s.kind = LossKind::mse;
    s.model_id = std::move(id);
    s.dates = testing::business_days(values.size());
    s.values = std::move(values);
    return s;
}

LossSeries zeros(std::string id, std::size_t n) { return series(std::move(id), std::vector<double>(n, 0.0)); }

}  // namespace

TEST_SUITE("inference") {

TEST_CASE("bandwidth rule") {
    CHECK(auto_bandwidth(100) == 4);
    CHECK(auto_bandwidth(500) == 5);
    CHECK(auto_bandwidth(10000) == static_cast<std::size_t>(std::floor(4 * std::pow(100.0, 2.0 / 9.0))));
}

TEST_CASE("newey-west") {
    const auto x = normals(200, 1);
    double m = 0;
    for (double v : x) m += v / 200;
    double g0 = 0;
    for (double v : x) g0 += (v - m) * (v - m) / 200;
    CHECK(newey_west_lrv(x, 0) == doctest::Approx(g0).epsilon(1e-13));

    double g1 = 0;
    for (std::size_t t = 1; t < x.size(); ++t) g1 += (x[t] - m) * (x[t - 1] - m) / 200;
    CHECK(newey_west_lrv(x, 1) == doctest::Approx(g0 + 2 * 0.5 * g1).epsilon(1e-13));

    const double iid = newey_west_lrv(normals(10000, 2));
    CHECK(iid >= 0.9);
    CHECK(iid <= 1.1);

    const auto e = normals(20001, 3);
    std::vector<double> ma(20000);
    for (std::size_t t = 0; t < ma.size(); ++t) ma[t] = e[t + 1] + 0.5 * e[t];
    CHECK(newey_west_lrv(ma) == doctest::Approx(2.25).epsilon(0.15));

    CHECK_THROWS_AS((void)newey_west_lrv(std::vector<double>(50, 3.0)), DegenerateError);
    CHECK_THROWS_AS((void)newey_west_lrv(normals(9, 1)), DomainError);
    CHECK(newey_west(x, 500).lags == 199);
}

TEST_CASE("distribution tails") {
    CHECK(normal_sf(0.0) == 0.5);
    CHECK(normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi_square_sf(5.991464547107979, 2) == doctest::Approx(0.05).epsilon(1e-10));
}

TEST_CASE("dm test") {
    const auto a = series("A", normals(300, 4));
    const auto b = series("B", normals(300, 5));
    const auto ab = dm_test(a, b);
    const auto ba = dm_test(b, a);
    CHECK(ab.statistic == -ba.statistic);
    CHECK(ab.p_one_sided + ba.p_one_sided == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ab.p_two_sided == doctest::Approx(2 * std::min(ab.p_one_sided, 1 - ab.p_one_sided)).epsilon(1e-12));
    CHECK(ab.n == 300);
    CHECK(ab.hac_lags == auto_bandwidth(300));

    const auto same = dm_test(a, a);
    CHECK(same.degenerate);
    CHECK(std::isnan(same.statistic));
    CHECK(std::isnan(same.p_one_sided));

    auto shifted = normals(300, 6, 1e-3);
    for (double& v : shifted) v += 1.0;
    const auto big = dm_test(series("A", shifted), zeros("B", 300));
    CHECK(big.statistic > 10);
    CHECK(big.p_one_sided < 0.01);

    CHECK_THROWS_AS((void)dm_test(series("A", normals(20, 1)), series("B", normals(20, 2))), DomainError);
    CHECK_THROWS_AS((void)dm_test(series("A", normals(40, 1)), series("B", normals(41, 2))), DomainError);
    auto other_kind = b;
    other_kind.kind = LossKind::qlike;
    CHECK_THROWS_AS((void)dm_test(a, other_kind), DomainError);
    auto moved = b;
    moved.dates[7] = TradingDay(1999, 1, 4);
    CHECK_THROWS_AS((void)dm_test(a, moved), DomainError);
}

TEST_CASE("dm p-values are uniform under the null") {
    std::vector<double> p;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed)
        p.push_back(dm_test(series("A", normals(250, seed)), zeros("B", 250)).p_one_sided);
    std::sort(p.begin(), p.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double n = static_cast<double>(p.size());
        ks = std::max({ks, std::fabs(p[i] - static_cast<double>(i) / n), std::fabs(p[i] - static_cast<double>(i + 1) / n)});
    }
    CHECK(ks < 0.05);
}

TEST_CASE("gw constant mode is the squared dm statistic") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto a = series("A", normals(120, seed));
        const auto b = series("B", normals(120, seed + 1000));
        const auto dm = dm_test(a, b);
        const auto gw = gw_test(a, b);
        CHECK(std::fabs(gw.statistic - dm.statistic * dm.statistic) < 1e-10);
        CHECK(gw.k == 1);
        CHECK(gw.p_value == doctest::Approx(dm.p_two_sided).epsilon(1e-9));
    }
    const auto a = series("A", normals(120, 1));
    CHECK(gw_test(a, a).degenerate);
}

TEST_CASE("gw conditional mode has power against predictable differentials") {
    int conditional = 0, constant = 0;
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
        const auto e = normals(200, seed);
        std::vector<double> d(200);
        d[0] = e[0];
        for (std::size_t t = 1; t < d.size(); ++t) d[t] = 0.9 * d[t - 1] + e[t];
        const auto a = series("A", d);
        const auto b = zeros("B", d.size());
        if (gw_test(a, b, GwInstruments::lagged_differential).p_value < 0.05) ++conditional;
        if (gw_test(a, b, GwInstruments::constant).p_value < 0.05) ++constant;
    }
    CHECK(conditional > constant);
    const auto r = gw_test(series("A", normals(100, 3)), zeros("B", 100), GwInstruments::lagged_differential);
    CHECK(r.k == 2);
    CHECK(r.statistic >= 0.0);
}

TEST_CASE("stationary bootstrap") {
    BootstrapConfig cfg;
    cfg.replications = 200;
    cfg.expected_block_length = 12.0;
    cfg.seed = 99;
    const auto a = stationary_bootstrap(300, cfg);
    const auto b = stationary_bootstrap(300, cfg);
    CHECK(a == b);
    REQUIRE(a.size() == 200);
    CHECK(a[0].size() == 300);
    CHECK(bootstrap_replication(300, cfg, 17) == a[17]);
    cfg.threads = 4;
    CHECK(stationary_bootstrap(300, cfg) == a);

    std::size_t blocks = 0, draws = 0;
    for (const auto& rep : a) {
        for (std::size_t i = 0; i < rep.size(); ++i) {
            CHECK(rep[i] < 300);
            if (i == 0 || rep[i] != (rep[i - 1] + 1) % 300) ++blocks;
            ++draws;
        }
    }
    // A fresh start that lands on the continuation index is counted as part of the block.
    const double mean_block = static_cast<double>(draws) / static_cast<double>(blocks);
    CHECK(mean_block == doctest::Approx(12.0).epsilon(0.1));

    cfg.replications = 50;
    CHECK_THROWS_AS((void)stationary_bootstrap(300, cfg), DomainError);
    cfg.replications = 100;
    cfg.expected_block_length = 1.0;
    CHECK_THROWS_AS((void)stationary_bootstrap(300, cfg), DomainError);
    cfg.expected_block_length = 2.0;
    CHECK_THROWS_AS((void)stationary_bootstrap(1, cfg), DomainError);
}

TEST_CASE("near-iid bootstrap draws are uniform") {
    BootstrapConfig cfg;
    cfg.replications = 400;
    cfg.expected_block_length = 1.0 + 1e-9;
    cfg.seed = 5;
    const std::size_t n = 50;
    std::vector<double> counts(n, 0.0);
    for (const auto& rep : stationary_bootstrap(n, cfg))
        for (std::size_t i : rep) counts[i] += 1.0;
    const double expected = static_cast<double>(cfg.replications);
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi_square_sf(chi2, static_cast<double>(n - 1)) > 0.01);
}

TEST_CASE("mcs with identical losses keeps everything") {
    const auto v = normals(200, 7);
    std::vector<LossSeries> l{series("A", v), series("B", v), series("C", v)};
    BootstrapConfig cfg;
    cfg.replications = 200;
    const auto r = mcs(l, cfg, 0.95);
    CHECK(r.retained == std::vector<std::string>{"A", "B", "C"});
    CHECK(r.eliminated.empty());
    for (const auto& [id, p] : r.mcs_p) CHECK(p == 1.0);
}

TEST_CASE("mcs drops a dominated model") {
    const auto v = normals(500, 8, 0.1);
    auto w = normals(500, 9, 0.1);
    for (double& x : w) x += 1.0;
    std::vector<LossSeries> l{series("GOOD", v), series("BAD", w)};
    BootstrapConfig cfg;
    cfg.replications = 500;
    cfg.seed = 3;
    for (McsStatistic stat : {McsStatistic::range, McsStatistic::max}) {
        const auto r = mcs(l, cfg, 0.95, stat);
        CHECK(r.retained == std::vector<std::string>{"GOOD"});
        REQUIRE(r.eliminated.size() == 1);
        CHECK(r.eliminated[0].first == "BAD");
        CHECK(r.mcs_p.back().first == "GOOD");
        CHECK(r.mcs_p.back().second == 1.0);
    }
}

TEST_CASE("mcs p-values, nesting and reproducibility") {
    std::vector<LossSeries> l;
    for (int m = 0; m < 6; ++m) {
        auto v = normals(300, 20 + m, 0.5);
        for (double& x : v) x += 0.05 * m;
        l.push_back(series("M" + std::to_string(m), v));
    }
    BootstrapConfig cfg;
    cfg.replications = 500;
    cfg.seed = 11;
    const auto r95 = mcs(l, cfg, 0.95);
    const auto r90 = mcs(l, cfg, 0.90);
    REQUIRE(r95.mcs_p.size() == 6);
    for (std::size_t i = 1; i < r95.mcs_p.size(); ++i) CHECK(r95.mcs_p[i].second >= r95.mcs_p[i - 1].second);
    CHECK(r95.retained.size() + r95.eliminated.size() == 6);
    const std::set<std::string> s95(r95.retained.begin(), r95.retained.end());
    for (const auto& id : r90.retained) CHECK(s95.count(id) == 1);

    cfg.threads = 3;
    const auto again = mcs(l, cfg, 0.95);
    CHECK(again.mcs_p == r95.mcs_p);
    CHECK(again.retained == r95.retained);

    CHECK_THROWS_AS((void)mcs(std::span<const LossSeries>(l.data(), 1), cfg, 0.95), DomainError);
    CHECK_THROWS_AS((void)mcs(l, cfg, 0.4), DomainError);
    auto dup = l;
    dup[1].model_id = "M0";
    CHECK_THROWS_AS((void)mcs(dup, cfg, 0.95), DomainError);
}

}
