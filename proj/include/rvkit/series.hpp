#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rvkit {

/// A calendar trading day (no time zone).
class TradingDay {
public:
    TradingDay() = default;
    explicit TradingDay(std::chrono::year_month_day ymd);
    TradingDay(int year, unsigned month, unsigned day);

    /// Parses the leading `YYYY-MM-DD` of `text`; trailing characters (a time
    /// or zone suffix) are ignored. Throws FormatError.
    static TradingDay parse(std::string_view text);

    [[nodiscard]] std::chrono::year_month_day ymd() const noexcept { return ymd_; }
    [[nodiscard]] std::chrono::sys_days days() const noexcept { return std::chrono::sys_days{ymd_}; }
    [[nodiscard]] std::string iso() const;

    friend bool operator==(const TradingDay&, const TradingDay&) = default;
    friend std::strong_ordering operator<=>(const TradingDay& a, const TradingDay& b) noexcept {
        return a.days() <=> b.days();
    }

private:
    std::chrono::year_month_day ymd_{std::chrono::year{1970}, std::chrono::month{1},
                                     std::chrono::day{1}};
};

struct RvObservation {
    TradingDay date;
    double close = 1.0;
    double rv = 0.0;
    std::optional<double> bpv;
};

/// Per-symbol daily series of realized measures. Dates are strictly increasing.
/// In log space `rv` and `bpv` hold natural logarithms.
class RvSeries {
public:
    RvSeries() = default;
    RvSeries(std::string symbol, std::vector<RvObservation> observations, bool log_space = false);

    [[nodiscard]] const std::string& symbol() const noexcept { return symbol_; }
    [[nodiscard]] bool log_space() const noexcept { return log_space_; }
    [[nodiscard]] std::size_t size() const noexcept { return observations_.size(); }
    [[nodiscard]] bool empty() const noexcept { return observations_.empty(); }
    [[nodiscard]] std::span<const RvObservation> observations() const noexcept {
        return observations_;
    }
    [[nodiscard]] const RvObservation& operator[](std::size_t i) const { return observations_[i]; }

    [[nodiscard]] std::vector<double> rv_values() const;
    [[nodiscard]] std::vector<double> closes() const;
    [[nodiscard]] std::vector<TradingDay> dates() const;
    /// Throws DomainError naming the first date without a bpv value.
    [[nodiscard]] std::vector<double> bpv_values() const;
    [[nodiscard]] bool has_complete_bpv() const noexcept;

    /// Index of `day`, if present.
    [[nodiscard]] std::optional<std::size_t> find(TradingDay day) const noexcept;

private:
    std::string symbol_;
    std::vector<RvObservation> observations_;
    bool log_space_ = false;
};

struct IntradayReturns {
    TradingDay day;
    std::vector<double> returns;
};

/// ln(p[i+1] / p[i]). Throws DomainError on a non-positive price.
[[nodiscard]] std::vector<double> compute_log_returns(std::span<const double> prices);

/// Realized variance: sum of squared intraday returns.
[[nodiscard]] double compute_rv(const IntradayReturns& intraday);
[[nodiscard]] double compute_rv(std::span<const double> returns);

/// Bipower variation: (pi/2) * sum_{i>=2} |r_i| |r_{i-1}|.
[[nodiscard]] double compute_bpv(const IntradayReturns& intraday);
[[nodiscard]] double compute_bpv(std::span<const double> returns);

/// Replaces rv (and bpv) by their logarithms. A non-positive rv is an error
/// listing every offending date; a non-positive bpv becomes missing.
[[nodiscard]] RvSeries to_log(const RvSeries& series);

/// exp(x); overflow saturates to +inf with a warning.
[[nodiscard]] double from_log_forecast(double log_forecast);

/// How observations with rv <= 0 are handled at ingestion.
struct ZeroRvPolicy {
    /// When set, non-positive rv values are replaced by this floor instead of
    /// the row being dropped.
    std::optional<double> floor;
};

/// Applies the policy in place; returns the number of rows dropped or floored.
std::size_t apply_zero_policy(std::vector<RvObservation>& rows, const ZeroRvPolicy& policy);

enum class SummaryTransform { variance, volatility };

struct SummaryRow {
    std::string label;
    std::size_t count = 0;
    double min = 0.0;
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation (n - 1)
    double median = 0.0;
    double max = 0.0;
};

struct SummaryTable {
    SummaryTransform transform = SummaryTransform::volatility;
    std::vector<SummaryRow> rows;  // "Total" first, then one row per segment
};

/// Descriptive statistics over the whole series and over segments cut at
/// floor(n * breakpoint). Breakpoints must be strictly increasing in (0, 1];
/// segment k covers [floor(n b_{k-1}), floor(n b_k)) with b_0 = 0.
[[nodiscard]] SummaryTable summary_stats(const RvSeries& series, std::span<const double> breakpoints,
                                         SummaryTransform transform);

[[nodiscard]] SummaryRow describe(std::string label, std::span<const double> values);

}  // namespace rvkit
