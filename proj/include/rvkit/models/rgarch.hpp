#pragma once

#include "rvkit/models/common.hpp"
#include "rvkit/models/optimizer.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rvkit::models {

/// Log-linear realized GARCH:
///   r_t      = sqrt(h_t) z_t
///   log h_t  = omega + sum_i beta_i log h_{t-i} + sum_j alpha_j log RV_{t-j}
///   log RV_t = xi + phi log h_t + tau z_t + u_t,   u_t ~ N(0, sigma_u2)
/// `beta` holds p lags and `alpha` q lags; the default is order (1, 1).
/// The first max(p, q) variances are fixed at h1.
struct RgarchParams {
    double omega = 0.0;
    std::vector<double> beta{0.7};
    std::vector<double> alpha{0.25};
    double xi = 0.0;
    double phi = 1.0;
    double tau = -0.05;
    double sigma_u2 = 0.2;
    double h1 = 1.0;

    [[nodiscard]] std::size_t p() const noexcept { return beta.size(); }
    [[nodiscard]] std::size_t q() const noexcept { return alpha.size(); }
    /// Number of free parameters (for AIC).
    [[nodiscard]] std::size_t parameter_count() const noexcept { return 6 + p() + q(); }
};

struct RgarchOrder {
    std::size_t p = 1;
    std::size_t q = 1;

    friend bool operator==(const RgarchOrder&, const RgarchOrder&) = default;
};

inline constexpr std::size_t kRgarchMinLength = 100;

/// Negative joint log-likelihood of returns and log RV. Returns +inf when an
/// intermediate overflows. Requires equal lengths >= 1 and rv > 0
/// (DomainError otherwise).
[[nodiscard]] double rgarch_nll(const RgarchParams& params, std::span<const double> returns,
                                std::span<const double> rv);

/// log h_t for t = 0..n: the n filtered values followed by the one-step-ahead
/// value implied by the last observation.
[[nodiscard]] std::vector<double> rgarch_filter_log_h(const RgarchParams& params,
                                                      std::span<const double> rv);

struct RgarchOptions {
    SimplexOptions simplex{.max_iterations = 5000};
    /// Bound on every optimizer coordinate except log h1.
    double coordinate_bound = 15.0;
    /// Finite-difference Newton steps applied after the simplex converges.
    int polish_steps = 20;
};

struct RgarchFit {
    RgarchParams params;
    FitDiagnostics diagnostics;
};

/// Default starting point: omega 0, beta 0.7, alpha 0.25, xi 0, phi 1,
/// tau -0.05, sigma_u2 0.2, h1 = sample variance of returns.
[[nodiscard]] RgarchParams default_rgarch_init(std::span<const double> returns,
                                               RgarchOrder order = {});

/// Maximum likelihood with the reduced-form log-variance process
/// c_k = beta_k + phi alpha_k kept stationary, and sigma_u2, h1 > 0.
/// An optimum on the coordinate bound is returned with a warning.
/// Orders up to (2, 2). Throws FitFailure<RgarchParams, FitDiagnostics> on
/// non-convergence and EstimationError on degenerate (constant) returns.
[[nodiscard]] RgarchFit fit_rgarch(std::span<const double> returns, std::span<const double> rv,
                                   const std::optional<RgarchParams>& init = std::nullopt,
                                   const RgarchOptions& options = {}, RgarchOrder order = {});

/// Minimum-AIC order over `grid`. Throws DomainError on an empty grid and
/// EstimationError when every fit fails.
[[nodiscard]] RgarchOrder select_rgarch_order(std::span<const double> returns,
                                              std::span<const double> rv,
                                              std::span<const RgarchOrder> grid,
                                              const RgarchOptions& options = {});

/// RV forecast for day t+1 of an order-(1,1) model from log h_t and log RV_t:
/// exp(xi + phi log h_{t+1} + (tau^2 + sigma_u2) / 2).
[[nodiscard]] double forecast_rgarch(const RgarchParams& params, double last_log_h,
                                     double last_log_rv);

/// Measurement-equation mean of RV given log h: exp(xi + phi log_h + (tau^2 + sigma_u2)/2).
[[nodiscard]] double rgarch_rv_mean(const RgarchParams& params, double log_h) noexcept;

}  // namespace rvkit::models
