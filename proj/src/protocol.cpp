#include "rvkit/protocol.hpp"

#include "rvkit/diagnostics.hpp"
#include "rvkit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace rvkit::eval {

namespace {

std::size_t floor_fraction(std::size_t n, double fraction) {
    // 1e-9 absorbs representation error such as 0.7 * 1000 = 699.999...
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9));
}

std::string describe_segment(std::size_t k, const Segment& s) {
    return "segment " + std::to_string(k + 1) + " (fit " + std::to_string(s.fit_start) + ".." +
           std::to_string(s.fit_end) + ")";
}

std::vector<double> bpv_or_nan(const RvSeries& series) {
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        out[i] = series[i].bpv.value_or(std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

// Forecast of the target at 0-based position t, in model space (log when
// spec.log_space), plus the residual variance used by the log correction.
class Forecaster {
public:
    virtual ~Forecaster() = default;
    virtual models::FitDiagnostics fit(models::IndexRange range) = 0;
    virtual double forecast(std::size_t t) = 0;
    [[nodiscard]] virtual double residual_variance() const = 0;
};

class HarForecaster final : public Forecaster {
public:
    HarForecaster(std::vector<double> target, std::vector<double> source)
        : target_(std::move(target)), source_(std::move(source)) {}

    models::FitDiagnostics fit(models::IndexRange range) override {
        models::FitDiagnostics diag;
        coef_ = models::fit_har_regression(target_, source_, range, &diag);
        return diag;
    }

    double forecast(std::size_t t) override {
        const models::HarRegressors r = models::build_har_regressors(
            std::span<const double>(source_).first(t), t);
        if (!std::isfinite(r.daily) || !std::isfinite(r.weekly) || !std::isfinite(r.monthly)) {
            throw DomainError("missing regressor value before position " + std::to_string(t + 1));
        }
        return models::forecast_har(coef_, r);
    }

    [[nodiscard]] double residual_variance() const override { return coef_.resid_var; }

private:
    std::vector<double> target_;
    std::vector<double> source_;
    models::HarCoefficients coef_;
};

class ArfimaForecaster final : public Forecaster {
public:
    ArfimaForecaster(std::vector<double> values, const ModelSpec& spec)
        : values_(std::move(values)), spec_(spec) {}

    models::FitDiagnostics fit(models::IndexRange range) override {
        const std::span<const double> window(values_.data() + range.begin, range.size());
        models::ArfimaOptions options;
        options.simplex.seed = spec_.seed;
        models::ArfimaOrder order = spec_.arfima_order;
        if (spec_.select_arfima_order) {
            order = models::select_arfima_order(window, options);
        }
        models::ArfimaFit fit = models::fit_arfima(window, order.p, order.q, options);
        params_ = fit.params;
        filter_.emplace(params_, values_.size() - range.begin);
        next_ = range.begin;
        return fit.diagnostics;
    }

    double forecast(std::size_t t) override {
        while (next_ < t) {
            filter_->push(values_[next_++]);
        }
        return filter_->forecast();
    }

    [[nodiscard]] double residual_variance() const override { return params_.innovation_var; }

private:
    std::vector<double> values_;
    const ModelSpec& spec_;
    models::ArfimaParams params_;
    std::optional<models::ArfimaFilter> filter_;
    std::size_t next_ = 0;
};

class RgarchForecaster final : public Forecaster {
public:
    RgarchForecaster(std::vector<double> returns, std::vector<double> rv, const ModelSpec& spec)
        : returns_(std::move(returns)), rv_(std::move(rv)), spec_(spec) {}

    models::FitDiagnostics fit(models::IndexRange range) override {
        // Day 0 has no close-to-close return.
        start_ = std::max<std::size_t>(range.begin, 1);
        if (range.end <= start_) {
            throw DomainError("RGARCH fit window has no returns");
        }
        const std::size_t len = range.end - start_;
        std::vector<double> r(returns_.begin() + static_cast<std::ptrdiff_t>(start_),
                              returns_.begin() + static_cast<std::ptrdiff_t>(range.end));
        double mean = 0.0;
        for (double v : r) {
            mean += v;
        }
        mean /= static_cast<double>(len);
        for (double& v : r) {
            v -= mean;
        }
        const std::span<const double> rv(rv_.data() + start_, len);
        models::RgarchOptions options;
        options.simplex.seed = spec_.seed;
        models::RgarchOrder order = spec_.rgarch_grid.empty() ? models::RgarchOrder{}
                                                              : spec_.rgarch_grid.front();
        if (spec_.rgarch_grid.size() > 1) {
            order = models::select_rgarch_order(r, rv, spec_.rgarch_grid, options);
        }
        models::RgarchFit fit = models::fit_rgarch(
            r, rv, models::default_rgarch_init(r, order), options, order);
        params_ = fit.params;
        return fit.diagnostics;
    }

    double forecast(std::size_t t) override {
        const std::span<const double> history(rv_.data() + start_, t - start_);
        const std::vector<double> log_h = models::rgarch_filter_log_h(params_, history);
        return models::rgarch_rv_mean(params_, log_h.back());
    }

    [[nodiscard]] double residual_variance() const override { return 0.0; }

private:
    std::vector<double> returns_;
    std::vector<double> rv_;
    const ModelSpec& spec_;
    models::RgarchParams params_;
    std::size_t start_ = 1;
};

std::unique_ptr<Forecaster> make_forecaster(const RvSeries& series, const ModelSpec& spec) {
    switch (spec.kind) {
        case ModelKind::har: {
            std::vector<double> rv = series.rv_values();
            return std::make_unique<HarForecaster>(rv, rv);
        }
        case ModelKind::char_har: {
            std::vector<double> bpv = bpv_or_nan(series);
            std::vector<double> target =
                spec.char_target == models::CharTarget::rv ? series.rv_values() : bpv;
            return std::make_unique<HarForecaster>(std::move(target), std::move(bpv));
        }
        case ModelKind::arfima:
            return std::make_unique<ArfimaForecaster>(series.rv_values(), spec);
        case ModelKind::rgarch: {
            std::vector<double> returns{0.0};
            const std::vector<double> r = compute_log_returns(series.closes());
            returns.insert(returns.end(), r.begin(), r.end());
            return std::make_unique<RgarchForecaster>(std::move(returns), series.rv_values(),
                                                      spec);
        }
    }
    throw DomainError("unknown model kind");
}

void check_char_window(const RvSeries& series, models::IndexRange range) {
    for (std::size_t i = range.begin; i < range.end; ++i) {
        if (!series[i].bpv) {
            throw DomainError("CHAR needs bpv on every fit date; missing on " +
                              series[i].date.iso());
        }
    }
}

}  // namespace

std::size_t SplitPlan::forecast_count() const noexcept {
    std::size_t count = 0;
    for (const Segment& s : segments) {
        count += s.test_length();
    }
    return count;
}

std::vector<double> default_breakpoints() { return {0.5, 0.7, 0.9, 1.0}; }

SplitPlan make_split_plan(std::size_t n, std::span<const double> breakpoints,
                          WindowScheme scheme) {
    if (n < 100) {
        throw DomainError("split plan needs at least 100 observations, have " + std::to_string(n));
    }
    if (breakpoints.size() < 2) {
        throw DomainError("split plan needs at least two breakpoints");
    }
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        const double b = breakpoints[i];
        if (!(b > 0.0 && b <= 1.0)) {
            throw DomainError("breakpoints must lie in (0, 1]");
        }
        if (i > 0 && !(b > breakpoints[i - 1])) {
            throw DomainError("breakpoints must be strictly increasing");
        }
    }
    if (breakpoints.back() != 1.0) {
        throw DomainError("the last breakpoint must be 1.0");
    }

    SplitPlan plan;
    plan.n = n;
    plan.scheme = scheme;
    std::vector<std::size_t> bounds;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        bounds.push_back(floor_fraction(n, breakpoints[i]));
    }
    bounds.push_back(n);

    const std::size_t width = bounds.front();
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        Segment s;
        s.fit_end = bounds[k];
        s.fit_start = scheme == WindowScheme::rolling ? s.fit_end - width + 1 : 1;
        s.test_start = s.fit_end + 1;
        s.test_end = bounds[k + 1];
        s.block_start = k == 0 ? 1 : bounds[k - 1] + 1;
        if (s.fit_length() < kMinSegmentLength) {
            throw DomainError("fit window of segment " + std::to_string(k + 1) + " has " +
                              std::to_string(s.fit_length()) + " observations, need " +
                              std::to_string(kMinSegmentLength));
        }
        if (s.test_end < s.test_start) {
            throw DomainError("test block of segment " + std::to_string(k + 1) + " is empty");
        }
        const std::size_t block = s.fit_end - s.block_start + 1;
        s.train_size = floor_fraction(block, plan.train_frac);
        s.val_size = block - s.train_size;
        plan.segments.push_back(s);
    }
    return plan;
}

ForecastSet::ForecastSet(std::string model_id, std::string symbol)
    : model_id_(std::move(model_id)), symbol_(std::move(symbol)) {}

void ForecastSet::insert(TradingDay day, double forecast) {
    if (!std::isfinite(forecast) || !(forecast > 0.0)) {
        throw DomainError("forecast for " + model_id_ + " on " + day.iso() +
                          " must be finite and positive");
    }
    if (!entries_.emplace(day, forecast).second) {
        throw DomainError("duplicate forecast for " + model_id_ + " on " + day.iso());
    }
}

std::optional<double> ForecastSet::at(TradingDay day) const {
    const auto it = entries_.find(day);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string ModelSpec::model_id() const {
    std::string base;
    switch (kind) {
        case ModelKind::har: base = "HAR"; break;
        case ModelKind::char_har: base = "CHAR"; break;
        case ModelKind::arfima: base = "ARFIMA"; break;
        case ModelKind::rgarch: base = "RGARCH"; break;
    }
    return log_space ? base + "_log" : base;
}

ModelKind parse_model_kind(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "har") {
        return ModelKind::har;
    }
    if (lower == "char") {
        return ModelKind::char_har;
    }
    if (lower == "arfima") {
        return ModelKind::arfima;
    }
    if (lower == "rgarch") {
        return ModelKind::rgarch;
    }
    throw DomainError("unknown model '" + std::string(name) + "' (har, char, arfima, rgarch)");
}

BacktestResult run_backtest(const RvSeries& series, const ModelSpec& spec, const SplitPlan& plan) {
    if (series.size() != plan.n) {
        throw DomainError("series has " + std::to_string(series.size()) +
                          " observations but the plan expects " + std::to_string(plan.n));
    }
    if (series.log_space()) {
        throw DomainError("run_backtest expects a linear-space series");
    }
    if (spec.kind == ModelKind::rgarch && spec.log_space) {
        throw DomainError("RGARCH already models log RV; the log flag does not apply");
    }
    if (!(spec.floor > 0.0)) {
        throw DomainError("forecast floor must be positive");
    }

    const RvSeries source = spec.log_space ? to_log(series) : series;
    std::unique_ptr<Forecaster> model = make_forecaster(source, spec);

    BacktestResult result;
    result.forecasts = ForecastSet(spec.model_id(), series.symbol());
    for (std::size_t k = 0; k < plan.segments.size(); ++k) {
        const Segment& s = plan.segments[k];
        const models::IndexRange range{s.fit_start - 1, s.fit_end};
        models::FitDiagnostics diag;
        try {
            if (spec.kind == ModelKind::char_har) {
                check_char_window(source, range);
            }
            diag = model->fit(range);
        } catch (const EstimationError& e) {
            throw EstimationError(spec.model_id() + " " + describe_segment(k, s) + ": " + e.what());
        }
        result.fits.push_back(SegmentFit{s, diag});

        const double correction =
            spec.log_space && spec.log_variance_correction ? 0.5 * model->residual_variance() : 0.0;
        for (std::size_t t = s.test_start - 1; t < s.test_end; ++t) {
            double value = model->forecast(t);
            if (spec.log_space) {
                value = from_log_forecast(value + correction);
            }
            if (std::isnan(value) || value == std::numeric_limits<double>::infinity()) {
                throw EstimationError(spec.model_id() + " produced a non-finite forecast for " +
                                      series[t].date.iso());
            }
            if (value < spec.floor) {
                value = spec.floor;
                ++result.clamped;
            }
            result.forecasts.insert(series[t].date, value);
        }
    }
    if (result.clamped > 0) {
        diag::warn(spec.model_id() + " " + series.symbol() + ": " +
                   std::to_string(result.clamped) + " forecasts raised to the floor " +
                   std::to_string(spec.floor));
    }
    return result;
}

std::vector<std::string> AlignedPanel::model_ids() const {
    std::vector<std::string> ids;
    ids.reserve(forecasts.size());
    for (const auto& entry : forecasts) {
        ids.push_back(entry.first);
    }
    return ids;
}

bool AlignedPanel::contains(std::string_view model_id) const noexcept {
    return std::any_of(forecasts.begin(), forecasts.end(),
                       [&](const auto& entry) { return entry.first == model_id; });
}

std::span<const double> AlignedPanel::forecast(std::string_view model_id) const {
    for (const auto& entry : forecasts) {
        if (entry.first == model_id) {
            return entry.second;
        }
    }
    throw DomainError("model '" + std::string(model_id) + "' is not in the panel");
}

AlignedPanel align(const RvSeries& series, std::span<const ForecastSet> sets,
                   const DateWindow& window, std::size_t min_periods) {
    if (series.log_space()) {
        throw DomainError("align expects a linear-space series");
    }
    if (sets.empty()) {
        throw DomainError("align needs at least one forecast set");
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].symbol() != series.symbol()) {
            throw DomainError("forecast set " + sets[i].model_id() + " is for symbol '" +
                              sets[i].symbol() + "', expected '" + series.symbol() + "'");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (sets[j].model_id() == sets[i].model_id()) {
                throw DomainError("duplicate model id '" + sets[i].model_id() + "'");
            }
        }
    }

    AlignedPanel panel;
    panel.symbol = series.symbol();
    for (const ForecastSet& set : sets) {
        panel.forecasts.emplace_back(set.model_id(), std::vector<double>{});
    }
    for (const auto& [day, first_value] : sets.front().entries()) {
        if ((window.first && day < *window.first) || (window.last && day > *window.last)) {
            continue;
        }
        const std::optional<std::size_t> idx = series.find(day);
        if (!idx) {
            continue;
        }
        std::vector<double> row{first_value};
        bool everywhere = true;
        for (std::size_t m = 1; m < sets.size() && everywhere; ++m) {
            const std::optional<double> v = sets[m].at(day);
            everywhere = v.has_value();
            if (everywhere) {
                row.push_back(*v);
            }
        }
        if (!everywhere) {
            continue;
        }
        panel.dates.push_back(day);
        panel.actuals.push_back(series[*idx].rv);
        for (std::size_t m = 0; m < sets.size(); ++m) {
            panel.forecasts[m].second.push_back(row[m]);
        }
    }
    if (panel.dates.empty()) {
        throw DomainError("forecasts and actuals for " + series.symbol() + " share no dates");
    }
    if (panel.dates.size() < min_periods) {
        throw DomainError("aligned panel for " + series.symbol() + " has " +
                          std::to_string(panel.dates.size()) + " periods, need " +
                          std::to_string(min_periods));
    }
    return panel;
}

}  // namespace rvkit::eval
