#pragma once

#include "rvkit/models/common.hpp"
#include "rvkit/series.hpp"

#include <cstddef>
#include <span>

namespace rvkit::models {

inline constexpr std::size_t kHarWeeklyLags = 5;
inline constexpr std::size_t kHarMonthlyLags = 22;

/// Lagged daily value and 5-day / 22-day means ending the day before the target.
struct HarRegressors {
    double daily = 0.0;
    double weekly = 0.0;
    double monthly = 0.0;
};

struct HarCoefficients {
    double omega = 0.0;
    double beta_d = 0.0;
    double beta_w = 0.0;
    double beta_m = 0.0;
    double resid_var = 0.0;  // SSR / (n - 4)
};

struct HarParams : HarCoefficients {};

/// Left-hand side of the CHAR regression. `rv` regresses realized variance on
/// lagged bipower components; `bpv` regresses bipower variation on itself.
enum class CharTarget { rv, bpv };

struct CharParams : HarCoefficients {
    CharTarget target = CharTarget::rv;
};

/// Regressors for the target at 0-based position `t`, built from
/// values[t-1], mean(values[t-5..t-1]) and mean(values[t-22..t-1]).
/// Requires t >= 22 and t <= values.size().
[[nodiscard]] HarRegressors build_har_regressors(std::span<const double> values, std::size_t t);
[[nodiscard]] HarRegressors build_har_regressors(const RvSeries& series, std::size_t t);

struct HarFit {
    HarParams params;
    FitDiagnostics diagnostics;
};

struct CharFit {
    CharParams params;
    FitDiagnostics diagnostics;
};

/// Minimum number of regression rows after the 22-day warm-up.
inline constexpr std::size_t kHarMinRows = 50;

/// OLS of target[t] on the HAR regressors built from `source`, for targets
/// t in [range.begin + 22, range.end). Throws EstimationError on a
/// rank-deficient design.
[[nodiscard]] HarCoefficients fit_har_regression(std::span<const double> target,
                                                 std::span<const double> source, IndexRange range,
                                                 FitDiagnostics* diagnostics = nullptr);

[[nodiscard]] HarFit fit_har(std::span<const double> rv, IndexRange range);
[[nodiscard]] HarFit fit_har(const RvSeries& series, IndexRange range);

/// Throws DomainError if any bpv in the range is missing.
[[nodiscard]] CharFit fit_char(const RvSeries& series, IndexRange range,
                               CharTarget target = CharTarget::rv);

[[nodiscard]] double forecast_har(const HarCoefficients& params,
                                  const HarRegressors& regressors) noexcept;
[[nodiscard]] inline double forecast_char(const CharParams& params,
                                          const HarRegressors& bpv_regressors) noexcept {
    return forecast_har(params, bpv_regressors);
}

}  // namespace rvkit::models
