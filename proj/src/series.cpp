#include "rvkit/series.hpp"

#include "rvkit/diagnostics.hpp"
#include "rvkit/errors.hpp"
#include "rvkit/simd/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace rvkit {

namespace {

unsigned parse_unsigned(std::string_view text, std::string_view whole) {
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError("invalid date '" + std::string{whole} + "'");
    }
    return value;
}

std::string join_dates(const std::vector<TradingDay>& days, std::size_t limit = 10) {
    std::string out;
    for (std::size_t i = 0; i < days.size() && i < limit; ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += days[i].iso();
    }
    if (days.size() > limit) {
        out += ", ... (" + std::to_string(days.size()) + " total)";
    }
    return out;
}

}  // namespace

TradingDay::TradingDay(std::chrono::year_month_day ymd) : ymd_(ymd) {
    if (!ymd_.ok()) {
        throw DomainError("invalid calendar date");
    }
}

TradingDay::TradingDay(int year, unsigned month, unsigned day)
    : TradingDay(std::chrono::year_month_day{std::chrono::year{year}, std::chrono::month{month},
                                             std::chrono::day{day}}) {}

TradingDay TradingDay::parse(std::string_view text) {
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
        throw FormatError("invalid date '" + std::string{text} + "', expected YYYY-MM-DD");
    }
    const unsigned y = parse_unsigned(text.substr(0, 4), text);
    const unsigned m = parse_unsigned(text.substr(5, 2), text);
    const unsigned d = parse_unsigned(text.substr(8, 2), text);
    const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(y)},
                                          std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) {
        throw FormatError("invalid date '" + std::string{text} + "'");
    }
    return TradingDay{ymd};
}

std::string TradingDay::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd_.year()),
                  static_cast<unsigned>(ymd_.month()), static_cast<unsigned>(ymd_.day()));
    return buf;
}

RvSeries::RvSeries(std::string symbol, std::vector<RvObservation> observations, bool log_space)
    : symbol_(std::move(symbol)), observations_(std::move(observations)), log_space_(log_space) {
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        const auto& obs = observations_[i];
        if (i > 0 && !(observations_[i - 1].date < obs.date)) {
            throw DomainError(symbol_ + ": dates not strictly increasing at " + obs.date.iso());
        }
        if (!(obs.close > 0.0) || !std::isfinite(obs.close)) {
            throw DomainError(symbol_ + ": close must be positive on " + obs.date.iso());
        }
        if (!std::isfinite(obs.rv) || (!log_space_ && obs.rv < 0.0)) {
            throw DomainError(symbol_ + ": invalid rv on " + obs.date.iso());
        }
        if (obs.bpv && (!std::isfinite(*obs.bpv) || (!log_space_ && *obs.bpv < 0.0))) {
            throw DomainError(symbol_ + ": invalid bpv on " + obs.date.iso());
        }
    }
}

std::vector<double> RvSeries::rv_values() const {
    std::vector<double> out;
    out.reserve(observations_.size());
    for (const auto& obs : observations_) {
        out.push_back(obs.rv);
    }
    return out;
}

std::vector<double> RvSeries::closes() const {
    std::vector<double> out;
    out.reserve(observations_.size());
    for (const auto& obs : observations_) {
        out.push_back(obs.close);
    }
    return out;
}

std::vector<TradingDay> RvSeries::dates() const {
    std::vector<TradingDay> out;
    out.reserve(observations_.size());
    for (const auto& obs : observations_) {
        out.push_back(obs.date);
    }
    return out;
}

std::vector<double> RvSeries::bpv_values() const {
    std::vector<double> out;
    out.reserve(observations_.size());
    for (const auto& obs : observations_) {
        if (!obs.bpv) {
            throw DomainError(symbol_ + ": missing bpv on " + obs.date.iso());
        }
        out.push_back(*obs.bpv);
    }
    return out;
}

bool RvSeries::has_complete_bpv() const noexcept {
    return std::all_of(observations_.begin(), observations_.end(),
                       [](const RvObservation& o) { return o.bpv.has_value(); });
}

std::optional<std::size_t> RvSeries::find(TradingDay day) const noexcept {
    const auto it = std::lower_bound(
        observations_.begin(), observations_.end(), day,
        [](const RvObservation& o, TradingDay d) { return o.date < d; });
    if (it == observations_.end() || it->date != day) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - observations_.begin());
}

std::vector<double> compute_log_returns(std::span<const double> prices) {
    if (prices.size() < 2) {
        throw DomainError("log returns need at least 2 prices, got " +
                          std::to_string(prices.size()));
    }
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0)) {
            throw DomainError("non-positive price at index " + std::to_string(i));
        }
    }
    std::vector<double> out(prices.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) {
        out[i] = std::log(prices[i + 1] / prices[i]);
    }
    return out;
}

double compute_rv(std::span<const double> returns) {
    if (returns.empty()) {
        throw DomainError("realized variance needs at least one intraday return");
    }
    return simd::sum_squares(returns);
}

double compute_rv(const IntradayReturns& intraday) { return compute_rv(intraday.returns); }

double compute_bpv(std::span<const double> returns) {
    if (returns.size() < 2) {
        throw DomainError("bipower variation needs at least two intraday returns");
    }
    return std::numbers::pi / 2.0 * simd::sum_abs_adjacent_products(returns);
}

double compute_bpv(const IntradayReturns& intraday) { return compute_bpv(intraday.returns); }

RvSeries to_log(const RvSeries& series) {
    if (series.log_space()) {
        throw DomainError(series.symbol() + ": series is already in log space");
    }
    std::vector<TradingDay> bad;
    std::vector<RvObservation> out(series.observations().begin(), series.observations().end());
    for (auto& obs : out) {
        if (!(obs.rv > 0.0)) {
            bad.push_back(obs.date);
            continue;
        }
        obs.rv = std::log(obs.rv);
        if (obs.bpv) {
            obs.bpv = *obs.bpv > 0.0 ? std::optional<double>{std::log(*obs.bpv)} : std::nullopt;
        }
    }
    if (!bad.empty()) {
        throw DomainError(series.symbol() + ": log transform needs rv > 0; offending dates: " +
                          join_dates(bad));
    }
    return RvSeries{series.symbol(), std::move(out), true};
}

double from_log_forecast(double log_forecast) {
    const double value = std::exp(log_forecast);
    if (std::isinf(value)) {
        diag::warn("exp overflow in log back-transform (input " + std::to_string(log_forecast) +
                   ")");
    }
    return value;
}

std::size_t apply_zero_policy(std::vector<RvObservation>& rows, const ZeroRvPolicy& policy) {
    std::size_t affected = 0;
    if (policy.floor) {
        if (!(*policy.floor > 0.0)) {
            throw DomainError("rv floor must be positive");
        }
        for (auto& row : rows) {
            if (!(row.rv > 0.0)) {
                row.rv = *policy.floor;
                ++affected;
            }
        }
        return affected;
    }
    const auto keep_end = std::remove_if(rows.begin(), rows.end(),
                                         [](const RvObservation& r) { return !(r.rv > 0.0); });
    affected = static_cast<std::size_t>(rows.end() - keep_end);
    rows.erase(keep_end, rows.end());
    return affected;
}

SummaryRow describe(std::string label, std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("empty segment '" + label + "'");
    }
    SummaryRow row;
    row.label = std::move(label);
    row.count = values.size();
    const auto n = static_cast<double>(values.size());
    row.mean = simd::sum(values) / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - row.mean) * (v - row.mean);
    }
    row.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    row.min = sorted.front();
    row.max = sorted.back();
    const std::size_t mid = sorted.size() / 2;
    row.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return row;
}

SummaryTable summary_stats(const RvSeries& series, std::span<const double> breakpoints,
                           SummaryTransform transform) {
    if (series.empty()) {
        throw DomainError("summary of an empty series");
    }
    if (breakpoints.empty()) {
        throw DomainError("at least one breakpoint is required");
    }
    double previous = 0.0;
    for (double b : breakpoints) {
        if (!(b > previous) || b > 1.0) {
            throw DomainError("breakpoints must be strictly increasing in (0, 1]");
        }
        previous = b;
    }

    std::vector<double> values = series.rv_values();
    if (series.log_space()) {
        for (double& v : values) {
            v = std::exp(v);
        }
    }
    if (transform == SummaryTransform::volatility) {
        for (double& v : values) {
            v = std::sqrt(v);
        }
    }

    SummaryTable table;
    table.transform = transform;
    table.rows.push_back(describe("Total", values));

    const auto n = static_cast<double>(values.size());
    std::size_t begin = 0;
    double lower = 0.0;
    for (std::size_t k = 0; k < breakpoints.size(); ++k) {
        const auto end = static_cast<std::size_t>(std::floor(n * breakpoints[k]));
        const long pct = std::lround((breakpoints[k] - lower) * 100.0);
        std::string label;
        if (k == 0) {
            label = "First " + std::to_string(pct) + "%";
        } else if (k + 1 == breakpoints.size() && breakpoints[k] == 1.0) {
            label = "Last " + std::to_string(pct) + "%";
        } else {
            label = "Next " + std::to_string(pct) + "%";
        }
        if (end <= begin) {
            throw DomainError("empty segment '" + label + "'");
        }
        table.rows.push_back(
            describe(label, std::span<const double>{values}.subspan(begin, end - begin)));
        begin = end;
        lower = breakpoints[k];
    }
    return table;
}

}  // namespace rvkit
