#pragma once

#include "rvkit/protocol.hpp"
#include "rvkit/series.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rvkit::loss {

enum class LossKind { mse, mae, mape, mda, qlike, smape };

[[nodiscard]] std::string_view to_string(LossKind kind) noexcept;
/// Case-insensitive; throws DomainError on an unknown name.
[[nodiscard]] LossKind parse_loss_kind(std::string_view name);
[[nodiscard]] std::vector<LossKind> all_loss_kinds();

/// True only for MDA, an accuracy rate.
[[nodiscard]] bool higher_is_better(LossKind kind) noexcept;
/// 100 for MAPE, MDA and SMAPE; 1 otherwise.
[[nodiscard]] double loss_scale(LossKind kind) noexcept;

/// Single-period contribution for every kind except MDA.
/// QLIKE is a/f - ln(a/f) - 1.
[[nodiscard]] double loss_contribution(LossKind kind, double actual, double forecast);

/// Per-period contributions before the 1/P or 100/P factor. MDA has P - 1
/// entries, dated by the later day of each change.
struct LossSeries {
    LossKind kind = LossKind::mse;
    std::string model_id;
    std::vector<TradingDay> dates;
    std::vector<double> values;
};

/// Throws DomainError listing dates with a zero or negative actual under
/// MAPE, QLIKE or SMAPE, and when P < 2 under MDA.
[[nodiscard]] LossSeries loss_series(LossKind kind, const eval::AlignedPanel& panel,
                                     std::string_view model_id);

/// Mean contribution times loss_scale(kind). Throws DomainError when empty.
[[nodiscard]] double aggregate_loss(const LossSeries& series);

/// ratios[row][col] = aggregate(col) / aggregate(row); the diagonal is 1.
struct SkillMatrix {
    LossKind kind = LossKind::mse;
    std::vector<std::string> model_ids;
    std::vector<std::vector<double>> ratios;
    bool higher_is_better = false;
};

/// Needs at least two models. Throws DegenerateError on a zero aggregate.
[[nodiscard]] SkillMatrix skill_matrix(LossKind kind, const eval::AlignedPanel& panel);

/// Quantile group (lower, upper] of the ranked actuals.
struct QuantileGroup {
    double lower = 0.0;
    double upper = 0.0;
};

[[nodiscard]] std::vector<QuantileGroup> deciles();

struct DecileReport {
    LossKind kind = LossKind::mse;
    std::string benchmark_id;
    std::vector<QuantileGroup> groups;
    std::vector<std::size_t> group_sizes;
    /// Per model, aggregate within each group divided by the benchmark's.
    std::vector<std::pair<std::string, std::vector<double>>> relative_losses;
};

/// Ranks periods by actual (ties by date), takes ranks [floor(lo P), floor(hi P))
/// for each group and compares each model's aggregate to the benchmark's.
/// Throws DomainError on a malformed group or one with fewer than 5 periods,
/// and DegenerateError when the benchmark's group aggregate is zero.
[[nodiscard]] DecileReport decile_report(LossKind kind, const eval::AlignedPanel& panel,
                                         std::string_view benchmark_id,
                                         std::span<const QuantileGroup> groups);

inline constexpr std::size_t kMinGroupSize = 5;

}  // namespace rvkit::loss
