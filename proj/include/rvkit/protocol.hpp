#pragma once

#include "rvkit/models/arfima.hpp"
#include "rvkit/models/common.hpp"
#include "rvkit/models/har.hpp"
#include "rvkit/models/rgarch.hpp"
#include "rvkit/series.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rvkit::eval {

/// Estimation window scheme. `expanding` always fits from observation 1;
/// `rolling` keeps the width of the first fit window.
enum class WindowScheme { expanding, rolling };

/// One re-estimation round. Positions are 1-based and inclusive, so the round
/// fits on [fit_start, fit_end] and tests on [test_start, test_end].
struct Segment {
    std::size_t fit_start = 1;
    std::size_t fit_end = 0;
    std::size_t test_start = 0;
    std::size_t test_end = 0;
    /// First observation not seen by any earlier round (1 in round one).
    std::size_t block_start = 1;
    /// Train / validation split of the newly revealed block.
    std::size_t train_size = 0;
    std::size_t val_size = 0;

    [[nodiscard]] std::size_t fit_length() const noexcept { return fit_end - fit_start + 1; }
    [[nodiscard]] std::size_t test_length() const noexcept { return test_end - test_start + 1; }
};

inline constexpr double kTrainFraction = 0.8;
inline constexpr double kValFraction = 0.2;
inline constexpr std::size_t kMinSegmentLength = 23;
inline constexpr std::size_t kForecastHorizon = 1;

struct SplitPlan {
    std::size_t n = 0;
    std::vector<Segment> segments;
    double train_frac = kTrainFraction;
    double val_frac = kValFraction;
    WindowScheme scheme = WindowScheme::expanding;

    [[nodiscard]] std::size_t forecast_count() const noexcept;
};

/// Breakpoints used throughout: fits end at 50%, 70% and 90% of the sample.
[[nodiscard]] std::vector<double> default_breakpoints();

/// Boundaries floor(n * b). Requires n >= 100 and breakpoints strictly
/// increasing in (0, 1] with the last equal to 1. Throws DomainError when a
/// fit window is shorter than 23 observations or a test block is empty.
[[nodiscard]] SplitPlan make_split_plan(std::size_t n, std::span<const double> breakpoints,
                                        WindowScheme scheme = WindowScheme::expanding);

/// Forecasts of one model for one symbol, keyed by the forecast date.
class ForecastSet {
public:
    ForecastSet() = default;
    ForecastSet(std::string model_id, std::string symbol);

    [[nodiscard]] const std::string& model_id() const noexcept { return model_id_; }
    [[nodiscard]] const std::string& symbol() const noexcept { return symbol_; }
    [[nodiscard]] const std::map<TradingDay, double>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }

    /// Throws DomainError on a duplicate date or a value that is not finite and > 0.
    void insert(TradingDay day, double forecast);
    [[nodiscard]] std::optional<double> at(TradingDay day) const;

private:
    std::string model_id_;
    std::string symbol_;
    std::map<TradingDay, double> entries_;
};

enum class ModelKind { har, char_har, arfima, rgarch };

struct ModelSpec {
    ModelKind kind = ModelKind::har;
    bool log_space = false;
    models::CharTarget char_target = models::CharTarget::rv;
    models::ArfimaOrder arfima_order{};
    /// Chooses the ARFIMA order by AIC on each fit window.
    bool select_arfima_order = false;
    std::vector<models::RgarchOrder> rgarch_grid{models::RgarchOrder{}};
    std::uint64_t seed = 20240601;
    /// Forecasts below this value are raised to it and counted.
    double floor = 1e-10;
    /// Adds half the residual variance before exponentiating log forecasts.
    bool log_variance_correction = false;

    /// HAR, HAR_log, CHAR, CHAR_log, ARFIMA, ARFIMA_log or RGARCH.
    [[nodiscard]] std::string model_id() const;
};

[[nodiscard]] ModelKind parse_model_kind(std::string_view name);

struct SegmentFit {
    Segment segment;
    models::FitDiagnostics diagnostics;
};

struct BacktestResult {
    ForecastSet forecasts;
    std::size_t clamped = 0;
    std::vector<SegmentFit> fits;
};

/// Fits once per segment and forecasts each test day from history up to
/// the previous day with frozen parameters. Requires series.size() == plan.n
/// and a linear-space series. Fit failures are rethrown as EstimationError
/// naming the segment.
[[nodiscard]] BacktestResult run_backtest(const RvSeries& series, const ModelSpec& spec,
                                          const SplitPlan& plan);

struct DateWindow {
    std::optional<TradingDay> first;
    std::optional<TradingDay> last;
};

/// Actuals and every model's forecasts on the common dates.
struct AlignedPanel {
    std::string symbol;
    std::vector<TradingDay> dates;
    std::vector<double> actuals;
    std::vector<std::pair<std::string, std::vector<double>>> forecasts;

    [[nodiscard]] std::size_t size() const noexcept { return dates.size(); }
    [[nodiscard]] std::vector<std::string> model_ids() const;
    /// Throws DomainError when the model is absent.
    [[nodiscard]] std::span<const double> forecast(std::string_view model_id) const;
    [[nodiscard]] bool contains(std::string_view model_id) const noexcept;
};

inline constexpr std::size_t kMinPanelLength = 30;

/// Inner join of the series' rv values with every set, keeping insertion
/// order of models. Throws DomainError on an empty or too short join, a
/// duplicate model id, a symbol mismatch or a log-space series.
[[nodiscard]] AlignedPanel align(const RvSeries& series, std::span<const ForecastSet> sets,
                                 const DateWindow& window = {},
                                 std::size_t min_periods = kMinPanelLength);

}  // namespace rvkit::eval
