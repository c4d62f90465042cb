#include "rvkit/models/arfima.hpp"

#include "rvkit/errors.hpp"
#include "rvkit/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace rvkit::models {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_diff_args(double d, std::size_t truncation) {
    if (truncation < 1) {
        throw DomainError("fractional differencing truncation must be >= 1");
    }
    if (!(std::fabs(d) <= 1.0)) {
        throw DomainError("fractional differencing order must lie in [-1, 1], got " +
                          std::to_string(d));
    }
}

std::vector<double> reversed_weights(double d, std::size_t n) {
    const std::vector<double> w = frac_diff_weights(d, n);
    return {w.rbegin(), w.rend()};
}

// u_t = sum_{j<=t} w_{t-j} c_j for every t, with rw[N-1-k] = w_k.
std::vector<double> differenced_series(std::span<const double> rw, std::span<const double> c) {
    const std::size_t n = c.size();
    const std::size_t top = rw.size() - 1;
    std::vector<double> u(n);
    for (std::size_t t = 0; t < n; ++t) {
        u[t] = simd::dot(rw.subspan(top - t, t + 1), c.subspan(0, t + 1));
    }
    return u;
}

// e_t = u_t - sum_i ar_i u_{t-1-i} - sum_j ma_j e_{t-1-j}, zero pre-sample.
double arma_innovation(std::span<const double> u, std::span<const double> e, std::size_t t,
                       const std::vector<double>& ar, const std::vector<double>& ma) {
    double value = u[t];
    for (std::size_t i = 0; i < ar.size() && i < t; ++i) {
        value -= ar[i] * u[t - 1 - i];
    }
    for (std::size_t j = 0; j < ma.size() && j < t; ++j) {
        value -= ma[j] * e[t - 1 - j];
    }
    return value;
}

double css_of(const ArfimaParams& params, std::span<const double> x) {
    std::vector<double> c(x.begin(), x.end());
    for (double& v : c) {
        v -= params.mu;
    }
    const std::vector<double> rw = reversed_weights(params.d, c.size());
    const std::vector<double> u = differenced_series(rw, c);
    std::vector<double> e(u.size());
    for (std::size_t t = 0; t < u.size(); ++t) {
        e[t] = arma_innovation(u, e, t, params.ar, params.ma);
    }
    return simd::sum_squares(e);
}

struct Unpacked {
    double d;
    std::vector<double> ar;
    std::vector<double> ma;
};

Unpacked unpack(std::span<const double> theta, int p, int q) {
    Unpacked out;
    out.d = 1.0 / (1.0 + std::exp(-theta[0]));
    out.ar = stationary_from_unconstrained(theta.subspan(1, static_cast<std::size_t>(p)));
    out.ma = stationary_from_unconstrained(
        theta.subspan(1 + static_cast<std::size_t>(p), static_cast<std::size_t>(q)));
    // 1 + sum ma_j z^j = 1 - sum c_j z^j with c stationary => invertible.
    for (double& m : out.ma) {
        m = -m;
    }
    return out;
}

}  // namespace

std::vector<double> frac_diff_weights(double d, std::size_t count) {
    std::vector<double> w(count);
    if (count == 0) {
        return w;
    }
    w[0] = 1.0;
    for (std::size_t k = 1; k < count; ++k) {
        const double kd = static_cast<double>(k);
        w[k] = w[k - 1] * (kd - 1.0 - d) / kd;
    }
    return w;
}

std::vector<double> frac_diff(std::span<const double> x, double d, std::size_t truncation) {
    check_diff_args(d, truncation);
    const std::size_t n = x.size();
    if (n == 0) {
        return {};
    }
    const std::size_t order = std::min(truncation, n - 1);
    const std::vector<double> w = frac_diff_weights(d, order + 1);
    const std::vector<double> xr(x.rbegin(), x.rend());
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t m = std::min(t, order);
        y[t] = simd::dot(std::span<const double>{w}.subspan(0, m + 1),
                         std::span<const double>{xr}.subspan(n - 1 - t, m + 1));
    }
    return y;
}

std::vector<double> frac_integrate(std::span<const double> y, double d, std::size_t truncation) {
    check_diff_args(d, truncation);
    return frac_diff(y, -d, truncation);
}

double arfima_css(const ArfimaParams& params, std::span<const double> x) {
    return css_of(params, x);
}

ArfimaFit fit_arfima(std::span<const double> x, int p, int q, const ArfimaOptions& options) {
    if (p < 0 || p > 2 || q < 0 || q > 2) {
        throw DomainError("ARFIMA orders must lie in {0, 1, 2}");
    }
    if (x.size() < kArfimaMinLength) {
        throw DomainError("ARFIMA fit needs at least " + std::to_string(kArfimaMinLength) +
                          " observations, have " + std::to_string(x.size()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw DomainError("ARFIMA input contains a non-finite value");
        }
    }

    const double n = static_cast<double>(x.size());
    const double mu = simd::sum(x) / n;
    std::vector<double> centered(x.begin(), x.end());
    for (double& v : centered) {
        v -= mu;
    }
    // Weights are recomputed per evaluation; the buffer is reused.
    std::vector<double> rw(x.size());
    std::vector<double> e(x.size());

    const auto objective = [&](std::span<const double> theta) {
        for (double v : theta) {
            if (!(std::fabs(v) <= options.coordinate_bound)) {
                return kInf;
            }
        }
        const Unpacked u = unpack(theta, p, q);
        const std::vector<double> w = frac_diff_weights(u.d, x.size());
        std::copy(w.rbegin(), w.rend(), rw.begin());
        const std::vector<double> diffed = differenced_series(rw, centered);
        for (std::size_t t = 0; t < diffed.size(); ++t) {
            e[t] = arma_innovation(diffed, e, t, u.ar, u.ma);
        }
        return simd::sum_squares(e);
    };

    std::vector<double> start(1 + static_cast<std::size_t>(p + q), 0.0);
    start[0] = std::log(0.3 / 0.7);
    const SimplexResult best = minimize(objective, start, options.simplex);

    const Unpacked u = unpack(best.x, p, q);
    ArfimaParams params;
    params.d = u.d;
    params.p = p;
    params.q = q;
    params.ar = u.ar;
    params.ma = u.ma;
    params.mu = mu;
    params.innovation_var = best.value / n;

    const double loglik =
        -0.5 * n * (std::log(2.0 * std::numbers::pi) + std::log(params.innovation_var) + 1.0);
    const auto k = static_cast<std::size_t>(3 + p + q);
    const FitDiagnostics diagnostics =
        make_diagnostics(loglik, k, x.size(), best.converged, best.iterations);
    if (!best.converged || !std::isfinite(best.value)) {
        throw FitFailure<ArfimaParams, FitDiagnostics>(
            "ARFIMA(" + std::to_string(p) + ",d," + std::to_string(q) +
                ") CSS minimization did not converge",
            params, diagnostics);
    }
    return ArfimaFit{params, diagnostics};
}

ArfimaOrder select_arfima_order(std::span<const double> x, const ArfimaOptions& options) {
    ArfimaOrder best_order;
    double best_aic = kInf;
    for (int p = 0; p <= 2; ++p) {
        for (int q = 0; q <= 2; ++q) {
            try {
                const ArfimaFit fit = fit_arfima(x, p, q, options);
                if (fit.diagnostics.aic < best_aic) {
                    best_aic = fit.diagnostics.aic;
                    best_order = ArfimaOrder{p, q};
                }
            } catch (const EstimationError&) {
            }
        }
    }
    if (!std::isfinite(best_aic)) {
        throw EstimationError("ARFIMA order selection: no candidate order could be fitted");
    }
    return best_order;
}

ArfimaFilter::ArfimaFilter(ArfimaParams params, std::size_t capacity_hint)
    : params_(std::move(params)) {
    if (params_.ar.size() != static_cast<std::size_t>(params_.p) ||
        params_.ma.size() != static_cast<std::size_t>(params_.q)) {
        throw DomainError("ARFIMA parameter vectors do not match their orders");
    }
    reserve_weights(std::max<std::size_t>(capacity_hint + 1, 64));
    centered_.reserve(capacity_hint);
    differenced_.reserve(capacity_hint);
    innovations_.reserve(capacity_hint);
}

void ArfimaFilter::reserve_weights(std::size_t n) {
    if (reversed_weights_.size() >= n) {
        return;
    }
    reversed_weights_ = reversed_weights(params_.d, std::max(n, 2 * reversed_weights_.size()));
}

double ArfimaFilter::weighted_history(std::size_t t, std::size_t count) const {
    const std::size_t top = reversed_weights_.size() - 1;
    return simd::dot(std::span<const double>{reversed_weights_}.subspan(top - t, count),
                     std::span<const double>{centered_}.subspan(0, count));
}

void ArfimaFilter::push(double x) {
    const std::size_t t = centered_.size();
    reserve_weights(t + 2);
    centered_.push_back(x - params_.mu);
    differenced_.push_back(weighted_history(t, t + 1));
    innovations_.push_back(0.0);
    innovations_[t] = arma_innovation(differenced_, innovations_, t, params_.ar, params_.ma);
}

double ArfimaFilter::forecast() const {
    const std::size_t t = centered_.size();
    double next_u = 0.0;
    for (std::size_t i = 0; i < params_.ar.size() && i < t; ++i) {
        next_u += params_.ar[i] * differenced_[t - 1 - i];
    }
    for (std::size_t j = 0; j < params_.ma.size() && j < t; ++j) {
        next_u += params_.ma[j] * innovations_[t - 1 - j];
    }
    const double carried = t > 0 ? weighted_history(t, t) : 0.0;
    return params_.mu + next_u - carried;
}

double forecast_arfima(const ArfimaParams& params, std::span<const double> history) {
    const auto needed = static_cast<std::size_t>(std::max({params.p, params.q, 1}));
    if (history.size() < needed) {
        throw DomainError("ARFIMA forecast needs at least " + std::to_string(needed) +
                          " observations of history, have " + std::to_string(history.size()));
    }
    ArfimaFilter filter(params, history.size());
    for (double v : history) {
        filter.push(v);
    }
    return filter.forecast();
}

}  // namespace rvkit::models
