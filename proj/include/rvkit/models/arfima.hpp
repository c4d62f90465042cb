#pragma once

#include "rvkit/models/common.hpp"
#include "rvkit/models/optimizer.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rvkit::models {

/// ARFIMA(p, d, q) on a demeaned series:
///   (1 - sum_i ar_i B^i) (1 - B)^d (x_t - mu) = (1 + sum_j ma_j B^j) e_t
struct ArfimaParams {
    double d = 0.0;
    int p = 0;
    int q = 0;
    std::vector<double> ar;
    std::vector<double> ma;
    double mu = 0.0;
    double innovation_var = 0.0;
};

/// First `count` coefficients of (1 - B)^d: w_0 = 1, w_k = w_{k-1} (k - 1 - d) / k.
[[nodiscard]] std::vector<double> frac_diff_weights(double d, std::size_t count);

/// y_t = sum_{k=0}^{min(t, truncation)} w_k x_{t-k}; same length as x.
/// Requires truncation >= 1 and |d| <= 1.
[[nodiscard]] std::vector<double> frac_diff(std::span<const double> x, double d,
                                            std::size_t truncation);

/// Applies (1 - B)^{-d} with the same truncated recurrence.
[[nodiscard]] std::vector<double> frac_integrate(std::span<const double> y, double d,
                                                 std::size_t truncation);

struct ArfimaOptions {
    SimplexOptions simplex{};
    /// Bound on every unconstrained optimizer coordinate.
    double coordinate_bound = 15.0;
};

struct ArfimaFit {
    ArfimaParams params;
    FitDiagnostics diagnostics;
};

inline constexpr std::size_t kArfimaMinLength = 200;

/// Conditional sum of squares of the ARMA innovations of the fractionally
/// differenced, demeaned series (full-history truncation).
[[nodiscard]] double arfima_css(const ArfimaParams& params, std::span<const double> x);

/// CSS estimation with d in (0, 1) through a logistic map and stationary /
/// invertible AR and MA polynomials through partial-autocorrelation maps.
/// p, q in {0, 1, 2}; x.size() >= 200. Throws FitFailure<ArfimaParams,
/// FitDiagnostics> when the simplex does not converge.
[[nodiscard]] ArfimaFit fit_arfima(std::span<const double> x, int p, int q,
                                   const ArfimaOptions& options = {});

struct ArfimaOrder {
    int p = 1;
    int q = 1;
};

/// Minimum-AIC order over {0, 1, 2} x {0, 1, 2}.
[[nodiscard]] ArfimaOrder select_arfima_order(std::span<const double> x,
                                              const ArfimaOptions& options = {});

/// Incremental one-step-ahead predictor with frozen parameters. Each push()
/// costs O(current length).
class ArfimaFilter {
public:
    explicit ArfimaFilter(ArfimaParams params, std::size_t capacity_hint = 0);

    void push(double x);
    /// Conditional mean of the next observation.
    [[nodiscard]] double forecast() const;
    [[nodiscard]] std::size_t size() const noexcept { return centered_.size(); }

    /// Innovations e_t of the observations pushed so far.
    [[nodiscard]] std::span<const double> innovations() const noexcept { return innovations_; }

private:
    void reserve_weights(std::size_t n);
    /// sum_{j=0}^{count-1} w_{t-j} centered_[j]
    [[nodiscard]] double weighted_history(std::size_t t, std::size_t count) const;

    ArfimaParams params_;
    std::vector<double> reversed_weights_;  // reversed_weights_[N-1-k] = w_k
    std::vector<double> centered_;
    std::vector<double> differenced_;
    std::vector<double> innovations_;
};

/// One-step-ahead conditional mean given the whole history.
/// Requires history.size() >= max(p, q, 1).
[[nodiscard]] double forecast_arfima(const ArfimaParams& params, std::span<const double> history);

}  // namespace rvkit::models
