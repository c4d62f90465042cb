#include "rvkit/inference.hpp"

#include "rvkit/errors.hpp"
#include "rvkit/simd/kernels.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

namespace rvkit::stats {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> differential(const loss::LossSeries& a, const loss::LossSeries& b) {
    if (a.kind != b.kind) {
        throw DomainError("loss series compare different loss kinds");
    }
    if (a.values.size() != b.values.size()) {
        throw DomainError("loss series lengths differ (" + std::to_string(a.values.size()) +
                          " vs " + std::to_string(b.values.size()) + ")");
    }
    if (a.values.size() < kMinTestLength) {
        throw DomainError("predictive-accuracy tests need at least " +
                          std::to_string(kMinTestLength) + " periods");
    }
    if (!a.dates.empty() && !b.dates.empty() && a.dates != b.dates) {
        throw DomainError("loss series " + a.model_id + " and " + b.model_id +
                          " cover different dates");
    }
    std::vector<double> d(a.values.size());
    for (std::size_t t = 0; t < d.size(); ++t) {
        d[t] = a.values[t] - b.values[t];
    }
    return d;
}

bool constant(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

void check_config(const BootstrapConfig& config) {
    if (config.replications < kMinReplications) {
        throw DomainError("bootstrap needs at least " + std::to_string(kMinReplications) +
                          " replications");
    }
    if (!(config.expected_block_length > 1.0)) {
        throw DomainError("expected block length must exceed 1");
    }
}

// Runs body(b) for b in [0, count) on up to `threads` workers. Each index is
// written by exactly one worker.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body body) {
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    if (threads == 1) {
        for (std::size_t b = 0; b < count; ++b) {
            body(b);
        }
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t b = w; b < count; b += threads) {
                body(b);
            }
        });
    }
}

struct EliminationStep {
    std::size_t model = 0;
    double p_value = 1.0;
};

// boot[b * m + i]: mean loss of model i in replication b.
EliminationStep range_step(const std::vector<std::size_t>& alive, std::span<const double> mean,
                           std::span<const double> boot, std::size_t m, std::size_t reps) {
    const std::size_t k = alive.size();
    std::vector<double> scale(k * k, 0.0);
    std::vector<double> t(k * k, 0.0);
    double observed = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t c = a + 1; c < k; ++c) {
            const std::size_t i = alive[a];
            const std::size_t j = alive[c];
            const double dbar = mean[i] - mean[j];
            double v = 0.0;
            for (std::size_t b = 0; b < reps; ++b) {
                const double z = boot[b * m + i] - boot[b * m + j] - dbar;
                v += z * z;
            }
            v /= static_cast<double>(reps);
            double tij = 0.0;
            if (v > 0.0) {
                scale[a * k + c] = 1.0 / std::sqrt(v);
                tij = dbar * scale[a * k + c];
            } else if (dbar != 0.0) {
                tij = dbar > 0.0 ? kInf : -kInf;
            }
            t[a * k + c] = tij;
            t[c * k + a] = -tij;
            observed = std::max(observed, std::fabs(tij));
        }
    }
    std::size_t exceed = 0;
    for (std::size_t b = 0; b < reps; ++b) {
        double stat = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t c = a + 1; c < k; ++c) {
                const std::size_t i = alive[a];
                const std::size_t j = alive[c];
                const double z = boot[b * m + i] - boot[b * m + j] - (mean[i] - mean[j]);
                stat = std::max(stat, std::fabs(z) * scale[a * k + c]);
            }
        }
        exceed += stat >= observed ? 1 : 0;
    }
    EliminationStep step;
    step.p_value = static_cast<double>(exceed) / static_cast<double>(reps);
    double worst = -kInf;
    for (std::size_t a = 0; a < k; ++a) {
        double row = -kInf;
        for (std::size_t c = 0; c < k; ++c) {
            if (c != a) {
                row = std::max(row, t[a * k + c]);
            }
        }
        if (row > worst) {
            worst = row;
            step.model = alive[a];
        }
    }
    return step;
}

EliminationStep max_step(const std::vector<std::size_t>& alive, std::span<const double> mean,
                         std::span<const double> boot, std::size_t m, std::size_t reps) {
    const std::size_t k = alive.size();
    double grand = 0.0;
    for (std::size_t i : alive) {
        grand += mean[i];
    }
    grand /= static_cast<double>(k);
    std::vector<double> dbar(k);
    for (std::size_t a = 0; a < k; ++a) {
        dbar[a] = mean[alive[a]] - grand;
    }
    std::vector<double> centred(reps * k);
    std::vector<double> var(k, 0.0);
    for (std::size_t b = 0; b < reps; ++b) {
        double g = 0.0;
        for (std::size_t i : alive) {
            g += boot[b * m + i];
        }
        g /= static_cast<double>(k);
        for (std::size_t a = 0; a < k; ++a) {
            const double z = boot[b * m + alive[a]] - g - dbar[a];
            centred[b * k + a] = z;
            var[a] += z * z;
        }
    }
    std::vector<double> scale(k, 0.0);
    double observed = -kInf;
    EliminationStep step;
    for (std::size_t a = 0; a < k; ++a) {
        var[a] /= static_cast<double>(reps);
        double ti = 0.0;
        if (var[a] > 0.0) {
            scale[a] = 1.0 / std::sqrt(var[a]);
            ti = dbar[a] * scale[a];
        } else if (dbar[a] != 0.0) {
            ti = dbar[a] > 0.0 ? kInf : -kInf;
        }
        if (ti > observed) {
            observed = ti;
            step.model = alive[a];
        }
    }
    std::size_t exceed = 0;
    for (std::size_t b = 0; b < reps; ++b) {
        double stat = -kInf;
        for (std::size_t a = 0; a < k; ++a) {
            stat = std::max(stat, centred[b * k + a] * scale[a]);
        }
        exceed += stat >= observed ? 1 : 0;
    }
    step.p_value = static_cast<double>(exceed) / static_cast<double>(reps);
    return step;
}

}  // namespace

std::size_t auto_bandwidth(std::size_t n) noexcept {
    return static_cast<std::size_t>(
        std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

HacEstimate newey_west(std::span<const double> x, std::optional<std::size_t> lags) {
    const std::size_t n = x.size();
    if (n < 10) {
        throw DomainError("Newey-West variance needs at least 10 observations");
    }
    if (constant(x)) {
        throw DegenerateError("Newey-West variance of a constant series is zero");
    }
    HacEstimate est;
    est.lags = std::min(lags.value_or(auto_bandwidth(n)), n - 1);
    const double mean = simd::sum(x) / static_cast<double>(n);
    std::vector<double> c(x.begin(), x.end());
    for (double& v : c) {
        v -= mean;
    }
    const std::span<const double> cs(c);
    double total = simd::sum_squares(cs) / static_cast<double>(n);
    for (std::size_t j = 1; j <= est.lags; ++j) {
        const double w = 1.0 - static_cast<double>(j) / static_cast<double>(est.lags + 1);
        total += 2.0 * w * simd::dot(cs.subspan(j), cs) / static_cast<double>(n);
    }
    if (!(total > 0.0)) {
        est.variance = kVarianceFloor;
        est.degenerate = true;
    } else {
        est.variance = total;
    }
    return est;
}

double newey_west_lrv(std::span<const double> x, std::optional<std::size_t> lags) {
    return newey_west(x, lags).variance;
}

double normal_sf(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double chi_square_sf(double x, double dof) {
    if (!(dof > 0.0)) {
        throw DomainError("chi-square degrees of freedom must be positive");
    }
    if (std::isnan(x)) {
        return kNaN;
    }
    if (x <= 0.0) {
        return 1.0;
    }
    if (x == kInf) {
        return 0.0;
    }
    return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

DmResult dm_test(const loss::LossSeries& loss_a, const loss::LossSeries& loss_b,
                 std::optional<std::size_t> lags) {
    const std::vector<double> d = differential(loss_a, loss_b);
    DmResult r;
    r.n = d.size();
    r.hac_lags = std::min(lags.value_or(auto_bandwidth(r.n)), r.n - 1);
    if (constant(d)) {
        r.degenerate = true;
    } else {
        const HacEstimate hac = newey_west(d, r.hac_lags);
        r.degenerate = hac.degenerate;
        if (!r.degenerate) {
            const double mean = simd::sum(d) / static_cast<double>(r.n);
            r.statistic = mean / std::sqrt(hac.variance / static_cast<double>(r.n));
            r.p_one_sided = normal_sf(r.statistic);
            r.p_two_sided = 2.0 * std::min(r.p_one_sided, 1.0 - r.p_one_sided);
        }
    }
    if (r.degenerate) {
        r.statistic = kNaN;
        r.p_one_sided = kNaN;
        r.p_two_sided = kNaN;
    }
    return r;
}

GwResult gw_test(const loss::LossSeries& loss_a, const loss::LossSeries& loss_b,
                 GwInstruments instruments, std::optional<std::size_t> lags) {
    GwResult r;
    if (instruments == GwInstruments::constant) {
        const DmResult dm = dm_test(loss_a, loss_b, lags);
        r.k = 1;
        r.degenerate = dm.degenerate;
        r.statistic = dm.degenerate ? kNaN : dm.statistic * dm.statistic;
        r.p_value = dm.degenerate ? kNaN : chi_square_sf(r.statistic, 1.0);
        return r;
    }

    const std::vector<double> d = differential(loss_a, loss_b);
    r.k = 2;
    if (constant(d)) {
        r.degenerate = true;
        r.statistic = kNaN;
        r.p_value = kNaN;
        return r;
    }
    const std::size_t m = d.size() - 1;
    double z1 = 0.0;
    double z2 = 0.0;
    double s11 = 0.0;
    double s12 = 0.0;
    double s22 = 0.0;
    for (std::size_t t = 1; t <= m; ++t) {
        const double a = d[t];
        const double b = d[t - 1] * d[t];
        z1 += a;
        z2 += b;
        s11 += a * a;
        s12 += a * b;
        s22 += b * b;
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    z1 *= inv_m;
    z2 *= inv_m;
    s11 *= inv_m;
    s12 *= inv_m;
    s22 *= inv_m;
    const double det = s11 * s22 - s12 * s12;
    if (!(det > 1e-12 * s11 * s22)) {
        throw DomainError("instrument moment matrix of the conditional test is singular");
    }
    const double quad = (s22 * z1 * z1 - 2.0 * s12 * z1 * z2 + s11 * z2 * z2) / det;
    r.statistic = static_cast<double>(m) * quad;
    r.p_value = chi_square_sf(r.statistic, 2.0);
    return r;
}

std::vector<std::size_t> bootstrap_replication(std::size_t n, const BootstrapConfig& config,
                                               std::size_t rep) {
    if (n < 2) {
        throw DomainError("bootstrap needs at least two observations");
    }
    check_config(config);
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    const auto r = static_cast<std::uint64_t>(rep);
    std::seed_seq seq{lo(config.seed), hi(config.seed), lo(r), hi(r)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> start(0, n - 1);
    std::bernoulli_distribution restart(1.0 / config.expected_block_length);

    std::vector<std::size_t> idx(n);
    idx[0] = start(rng);
    for (std::size_t t = 1; t < n; ++t) {
        idx[t] = restart(rng) ? start(rng) : (idx[t - 1] + 1) % n;
    }
    return idx;
}

std::vector<std::vector<std::size_t>> stationary_bootstrap(std::size_t n,
                                                           const BootstrapConfig& config) {
    if (n < 2) {
        throw DomainError("bootstrap needs at least two observations");
    }
    check_config(config);
    std::vector<std::vector<std::size_t>> out(config.replications);
    parallel_for(config.replications, config.threads,
                 [&](std::size_t b) { out[b] = bootstrap_replication(n, config, b); });
    return out;
}

McsResult mcs(std::span<const loss::LossSeries> losses, const BootstrapConfig& config,
              double level, McsStatistic statistic) {
    const std::size_t m = losses.size();
    if (m < 2) {
        throw DomainError("model confidence set needs at least two models");
    }
    if (!(level > 0.5 && level < 1.0)) {
        throw DomainError("MCS level must lie in (0.5, 1)");
    }
    check_config(config);
    const std::size_t n = losses.front().values.size();
    if (n < 2) {
        throw DomainError("MCS needs at least two periods");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (losses[i].values.size() != n) {
            throw DomainError("MCS loss series have different lengths");
        }
        if (losses[i].kind != losses.front().kind) {
            throw DomainError("MCS loss series mix loss kinds");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (losses[j].model_id == losses[i].model_id) {
                throw DomainError("duplicate model id '" + losses[i].model_id + "'");
            }
        }
    }

    const std::size_t reps = config.replications;
    std::vector<double> mean(m);
    for (std::size_t i = 0; i < m; ++i) {
        mean[i] = simd::sum(losses[i].values) / static_cast<double>(n);
    }
    std::vector<double> boot(reps * m);
    parallel_for(reps, config.threads, [&](std::size_t b) {
        const std::vector<std::size_t> idx = bootstrap_replication(n, config, b);
        for (std::size_t i = 0; i < m; ++i) {
            boot[b * m + i] = simd::gather_sum(losses[i].values, idx) / static_cast<double>(n);
        }
    });

    std::vector<std::size_t> alive(m);
    for (std::size_t i = 0; i < m; ++i) {
        alive[i] = i;
    }
    McsResult result;
    std::vector<double> p_of(m, 1.0);
    double running = 0.0;
    while (alive.size() > 1) {
        const EliminationStep step = statistic == McsStatistic::range
                                         ? range_step(alive, mean, boot, m, reps)
                                         : max_step(alive, mean, boot, m, reps);
        running = std::max(running, step.p_value);
        p_of[step.model] = running;
        result.mcs_p.emplace_back(losses[step.model].model_id, running);
        alive.erase(std::find(alive.begin(), alive.end(), step.model));
    }
    result.mcs_p.emplace_back(losses[alive.front()].model_id, 1.0);

    const double alpha = 1.0 - level;
    for (const auto& [id, p] : result.mcs_p) {
        if (p < alpha) {
            result.eliminated.emplace_back(id, p);
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (p_of[i] >= alpha) {
            result.retained.push_back(losses[i].model_id);
        }
    }
    return result;
}

}  // namespace rvkit::stats
