#include "rvkit/losses.hpp"

#include "rvkit/errors.hpp"
#include "rvkit/simd/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

namespace rvkit::loss {

namespace {

int sign(double x) noexcept { return (x > 0.0) - (x < 0.0); }

bool needs_positive_actuals(LossKind kind) noexcept {
    return kind == LossKind::mape || kind == LossKind::qlike || kind == LossKind::smape;
}

void check_actuals(LossKind kind, const eval::AlignedPanel& panel) {
    if (!needs_positive_actuals(kind)) {
        return;
    }
    std::string bad;
    std::size_t count = 0;
    for (std::size_t i = 0; i < panel.size(); ++i) {
        if (!(panel.actuals[i] > 0.0)) {
            if (count < 10) {
                bad += (count == 0 ? "" : ", ") + panel.dates[i].iso();
            }
            ++count;
        }
    }
    if (count > 0) {
        throw DomainError(std::string(to_string(kind)) + " needs positive actuals; " +
                          std::to_string(count) + " non-positive on " + bad +
                          (count > 10 ? ", ..." : ""));
    }
}

double mean_of(std::span<const double> values) {
    return simd::sum(values) / static_cast<double>(values.size());
}

}  // namespace

std::string_view to_string(LossKind kind) noexcept {
    switch (kind) {
        case LossKind::mse: return "MSE";
        case LossKind::mae: return "MAE";
        case LossKind::mape: return "MAPE";
        case LossKind::mda: return "MDA";
        case LossKind::qlike: return "QLIKE";
        case LossKind::smape: return "SMAPE";
    }
    return "?";
}

LossKind parse_loss_kind(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (LossKind kind : all_loss_kinds()) {
        if (upper == to_string(kind)) {
            return kind;
        }
    }
    throw DomainError("unknown loss '" + std::string(name) + "' (mse, mae, mape, mda, qlike, smape)");
}

std::vector<LossKind> all_loss_kinds() {
    return {LossKind::mse, LossKind::mae, LossKind::mape,
            LossKind::mda, LossKind::qlike, LossKind::smape};
}

bool higher_is_better(LossKind kind) noexcept { return kind == LossKind::mda; }

double loss_scale(LossKind kind) noexcept {
    return kind == LossKind::mape || kind == LossKind::mda || kind == LossKind::smape ? 100.0 : 1.0;
}

double loss_contribution(LossKind kind, double actual, double forecast) {
    switch (kind) {
        case LossKind::mse: return (actual - forecast) * (actual - forecast);
        case LossKind::mae: return std::fabs(actual - forecast);
        case LossKind::mape: return std::fabs(actual - forecast) / std::fabs(actual);
        case LossKind::smape:
            return 2.0 * std::fabs(actual - forecast) / (std::fabs(actual) + std::fabs(forecast));
        case LossKind::qlike: {
            const double ratio = actual / forecast;
            return ratio - std::log(ratio) - 1.0;
        }
        case LossKind::mda: break;
    }
    throw DomainError("MDA has no single-period contribution");
}

LossSeries loss_series(LossKind kind, const eval::AlignedPanel& panel, std::string_view model_id) {
    const std::span<const double> f = panel.forecast(model_id);
    const std::span<const double> a = panel.actuals;
    check_actuals(kind, panel);

    LossSeries out;
    out.kind = kind;
    out.model_id = std::string(model_id);
    const std::size_t n = panel.size();
    if (kind == LossKind::mda) {
        if (n < 2) {
            throw DomainError("MDA needs at least two periods");
        }
        out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
        out.values.resize(n - 1);
        for (std::size_t t = 1; t < n; ++t) {
            out.values[t - 1] = sign(a[t] - a[t - 1]) == sign(f[t] - f[t - 1]) ? 1.0 : 0.0;
        }
        return out;
    }

    out.dates = panel.dates;
    out.values.resize(n);
    switch (kind) {
        case LossKind::mse: simd::squared_errors(a, f, out.values); break;
        case LossKind::mae: simd::absolute_errors(a, f, out.values); break;
        case LossKind::mape: simd::absolute_percentage_errors(a, f, out.values); break;
        case LossKind::smape: simd::symmetric_percentage_errors(a, f, out.values); break;
        case LossKind::qlike:
            for (std::size_t t = 0; t < n; ++t) {
                out.values[t] = loss_contribution(kind, a[t], f[t]);
            }
            break;
        case LossKind::mda: break;
    }
    return out;
}

double aggregate_loss(const LossSeries& series) {
    if (series.values.empty()) {
        throw DomainError("cannot aggregate an empty loss series");
    }
    return loss_scale(series.kind) * mean_of(series.values);
}

SkillMatrix skill_matrix(LossKind kind, const eval::AlignedPanel& panel) {
    if (panel.forecasts.size() < 2) {
        throw DomainError("skill matrix needs at least two models");
    }
    SkillMatrix m;
    m.kind = kind;
    m.model_ids = panel.model_ids();
    m.higher_is_better = higher_is_better(kind);
    std::vector<double> agg;
    for (const std::string& id : m.model_ids) {
        agg.push_back(aggregate_loss(loss_series(kind, panel, id)));
        if (!(agg.back() > 0.0)) {
            throw DegenerateError(std::string(to_string(kind)) + " aggregate of " + id +
                                  " is zero; skill ratios are undefined");
        }
    }
    const std::size_t k = agg.size();
    m.ratios.assign(k, std::vector<double>(k, 1.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i != j) {
                m.ratios[i][j] = agg[j] / agg[i];
            }
        }
    }
    return m;
}

std::vector<QuantileGroup> deciles() {
    std::vector<QuantileGroup> g;
    for (int i = 0; i < 10; ++i) {
        g.push_back({i / 10.0, (i + 1) / 10.0});
    }
    return g;
}

DecileReport decile_report(LossKind kind, const eval::AlignedPanel& panel,
                           std::string_view benchmark_id, std::span<const QuantileGroup> groups) {
    if (!panel.contains(benchmark_id)) {
        throw DomainError("benchmark '" + std::string(benchmark_id) + "' is not in the panel");
    }
    if (groups.empty()) {
        throw DomainError("decile report needs at least one group");
    }
    const std::size_t n = panel.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return panel.actuals[x] < panel.actuals[y];
    });

    // Period index of every contribution (MDA starts at period 1).
    const std::size_t offset = kind == LossKind::mda ? 1 : 0;
    std::vector<std::vector<double>> contributions;
    std::vector<std::string> ids = panel.model_ids();
    for (const std::string& id : ids) {
        contributions.push_back(loss_series(kind, panel, id).values);
    }
    const auto bench = static_cast<std::size_t>(
        std::find(ids.begin(), ids.end(), benchmark_id) - ids.begin());

    DecileReport report;
    report.kind = kind;
    report.benchmark_id = std::string(benchmark_id);
    report.groups.assign(groups.begin(), groups.end());
    for (const std::string& id : ids) {
        report.relative_losses.emplace_back(id, std::vector<double>{});
    }

    for (const QuantileGroup& g : groups) {
        if (!(g.lower >= 0.0 && g.lower < g.upper && g.upper <= 1.0)) {
            throw DomainError("quantile group must satisfy 0 <= lower < upper <= 1");
        }
        const auto lo = static_cast<std::size_t>(std::floor(g.lower * static_cast<double>(n) + 1e-9));
        const auto hi = static_cast<std::size_t>(std::floor(g.upper * static_cast<double>(n) + 1e-9));
        std::vector<std::size_t> members;
        for (std::size_t r = lo; r < hi; ++r) {
            if (order[r] >= offset) {
                members.push_back(order[r] - offset);
            }
        }
        if (members.size() < kMinGroupSize) {
            throw DomainError("quantile group (" + std::to_string(g.lower) + ", " +
                              std::to_string(g.upper) + "] has " + std::to_string(members.size()) +
                              " periods, need " + std::to_string(kMinGroupSize));
        }
        std::sort(members.begin(), members.end());
        report.group_sizes.push_back(members.size());

        std::vector<double> agg(ids.size());
        for (std::size_t m = 0; m < ids.size(); ++m) {
            agg[m] = simd::gather_sum(contributions[m], members) / static_cast<double>(members.size());
        }
        if (!(agg[bench] > 0.0)) {
            throw DegenerateError("benchmark " + std::string(benchmark_id) +
                                  " has zero loss in a quantile group");
        }
        for (std::size_t m = 0; m < ids.size(); ++m) {
            report.relative_losses[m].second.push_back(m == bench ? 1.0 : agg[m] / agg[bench]);
        }
    }
    return report;
}

}  // namespace rvkit::loss
