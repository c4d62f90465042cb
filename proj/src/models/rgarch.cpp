#include "rvkit/models/rgarch.hpp"

#include "rvkit/diagnostics.hpp"
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
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

void check_inputs(std::span<const double> returns, std::span<const double> rv,
                  std::size_t min_length) {
    if (returns.size() != rv.size()) {
        throw DomainError("RGARCH returns and rv lengths differ (" +
                          std::to_string(returns.size()) + " vs " + std::to_string(rv.size()) +
                          ")");
    }
    if (returns.size() < min_length) {
        throw DomainError("RGARCH needs at least " + std::to_string(min_length) +
                          " observations, have " + std::to_string(returns.size()));
    }
    for (std::size_t t = 0; t < rv.size(); ++t) {
        if (!(rv[t] > 0.0) || !std::isfinite(rv[t])) {
            throw DomainError("RGARCH needs strictly positive rv; index " + std::to_string(t) +
                              " has " + std::to_string(rv[t]));
        }
        if (!std::isfinite(returns[t])) {
            throw DomainError("RGARCH return at index " + std::to_string(t) + " is not finite");
        }
    }
}

double next_log_h(const RgarchParams& params, std::span<const double> log_h,
                  std::span<const double> log_rv, std::size_t t) {
    const std::size_t lags = std::max(params.p(), params.q());
    if (t < lags) {
        return std::log(params.h1);
    }
    double value = params.omega;
    for (std::size_t i = 0; i < params.p(); ++i) {
        value += params.beta[i] * log_h[t - 1 - i];
    }
    for (std::size_t j = 0; j < params.q(); ++j) {
        value += params.alpha[j] * log_rv[t - 1 - j];
    }
    return value;
}

double nll_core(const RgarchParams& params, std::span<const double> returns,
                std::span<const double> log_rv, std::vector<double>& log_h) {
    if (!(params.sigma_u2 > 0.0) || !(params.h1 > 0.0)) {
        return kInf;
    }
    const std::size_t n = returns.size();
    log_h.resize(n);
    const double log_s2 = std::log(params.sigma_u2);
    // Neumaier-compensated sum; the optimum is flat enough that plain
    // accumulation noise swamps the finite-difference gradient.
    double total = 0.0;
    double carry = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double lh = next_log_h(params, log_h, log_rv, t);
        log_h[t] = lh;
        const double z = returns[t] * std::exp(-0.5 * lh);
        const double u = log_rv[t] - params.xi - params.phi * lh - params.tau * z;
        const double term = lh + z * z + u * u / params.sigma_u2;
        const double next = total + term;
        carry += std::fabs(total) >= std::fabs(term) ? (total - next) + term : (term - next) + total;
        total = next;
        if (!std::isfinite(total)) {
            return kInf;
        }
    }
    const double constant = static_cast<double>(n) * (2.0 * kLog2Pi + log_s2);
    return 0.5 * ((total + carry) + constant);
}

std::vector<double> logs_of(std::span<const double> rv) {
    std::vector<double> out(rv.size());
    std::transform(rv.begin(), rv.end(), out.begin(), [](double v) { return std::log(v); });
    return out;
}

// theta = [omega, alpha_1..q, pacf_1..p, xi, phi, tau, log sigma_u2, log h1]
struct Layout {
    std::size_t p;
    std::size_t q;
    [[nodiscard]] std::size_t size() const { return 6 + p + q; }
    [[nodiscard]] std::size_t alpha() const { return 1; }
    [[nodiscard]] std::size_t pacf() const { return 1 + q; }
    [[nodiscard]] std::size_t xi() const { return 1 + q + p; }
};

// Returns false when the reduced-form lag polynomial is not stationary.
bool unpack(std::span<const double> theta, const Layout& layout, RgarchParams& out) {
    out.omega = theta[0];
    out.alpha.assign(theta.begin() + static_cast<std::ptrdiff_t>(layout.alpha()),
                     theta.begin() + static_cast<std::ptrdiff_t>(layout.alpha() + layout.q));
    const std::size_t x = layout.xi();
    out.xi = theta[x];
    out.phi = theta[x + 1];
    out.tau = theta[x + 2];
    out.sigma_u2 = std::exp(theta[x + 3]);
    out.h1 = std::exp(theta[x + 4]);
    const std::vector<double> c =
        stationary_from_unconstrained(theta.subspan(layout.pacf(), layout.p));
    out.beta.resize(layout.p);
    for (std::size_t k = 0; k < layout.p; ++k) {
        const double a = k < layout.q ? out.alpha[k] : 0.0;
        out.beta[k] = c[k] - out.phi * a;
    }
    if (layout.q > layout.p) {
        std::vector<double> full(layout.q);
        for (std::size_t k = 0; k < layout.q; ++k) {
            full[k] = (k < layout.p ? out.beta[k] : 0.0) + out.phi * out.alpha[k];
        }
        return is_stationary(full);
    }
    return true;
}

std::vector<double> pack(const RgarchParams& params, const Layout& layout) {
    std::vector<double> theta(layout.size());
    theta[0] = params.omega;
    std::vector<double> c(layout.p);
    for (std::size_t k = 0; k < layout.p; ++k) {
        theta[layout.alpha() + k] = 0.0;
        c[k] = params.beta[k] + params.phi * (k < layout.q ? params.alpha[k] : 0.0);
    }
    for (std::size_t j = 0; j < layout.q; ++j) {
        theta[layout.alpha() + j] = params.alpha[j];
    }
    if (!is_stationary(c)) {
        throw DomainError("RGARCH starting values imply a non-stationary log-variance process");
    }
    const std::vector<double> u = unconstrained_from_stationary(c);
    std::copy(u.begin(), u.end(), theta.begin() + static_cast<std::ptrdiff_t>(layout.pacf()));
    const std::size_t x = layout.xi();
    theta[x] = params.xi;
    theta[x + 1] = params.phi;
    theta[x + 2] = params.tau;
    theta[x + 3] = std::log(params.sigma_u2);
    theta[x + 4] = std::log(params.h1);
    return theta;
}

double sample_variance(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double mean = simd::sum(x) / n;
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mean) * (v - mean);
    }
    return ss / (n - 1.0);
}

}  // namespace

double rgarch_nll(const RgarchParams& params, std::span<const double> returns,
                  std::span<const double> rv) {
    check_inputs(returns, rv, 1);
    std::vector<double> log_h;
    return nll_core(params, returns, logs_of(rv), log_h);
}

std::vector<double> rgarch_filter_log_h(const RgarchParams& params, std::span<const double> rv) {
    for (std::size_t t = 0; t < rv.size(); ++t) {
        if (!(rv[t] > 0.0)) {
            throw DomainError("RGARCH needs strictly positive rv; index " + std::to_string(t));
        }
    }
    const std::vector<double> log_rv = logs_of(rv);
    std::vector<double> log_h(rv.size() + 1);
    for (std::size_t t = 0; t <= rv.size(); ++t) {
        log_h[t] = next_log_h(params, log_h, log_rv, t);
    }
    return log_h;
}

RgarchParams default_rgarch_init(std::span<const double> returns, RgarchOrder order) {
    RgarchParams init;
    init.beta.assign(order.p, 0.0);
    init.alpha.assign(order.q, 0.0);
    if (order.p > 0) {
        init.beta[0] = 0.7;
    }
    if (order.q > 0) {
        init.alpha[0] = 0.25;
    }
    init.h1 = returns.size() > 1 ? sample_variance(returns) : 1.0;
    return init;
}

RgarchFit fit_rgarch(std::span<const double> returns, std::span<const double> rv,
                     const std::optional<RgarchParams>& init, const RgarchOptions& options,
                     RgarchOrder order) {
    if (order.p < 1 || order.p > 2 || order.q < 1 || order.q > 2) {
        throw DomainError("RGARCH orders must lie in {1, 2}");
    }
    check_inputs(returns, rv, kRgarchMinLength);
    if (!(sample_variance(returns) > 0.0)) {
        throw EstimationError("RGARCH returns are constant; conditional variance is degenerate");
    }

    RgarchParams start = init ? *init : default_rgarch_init(returns, order);
    if (start.p() != order.p || start.q() != order.q) {
        throw DomainError("RGARCH starting values do not match the requested order");
    }
    const Layout layout{order.p, order.q};
    const std::vector<double> log_rv = logs_of(rv);
    std::vector<double> scratch;
    RgarchParams candidate = start;
    const std::size_t log_h1 = layout.size() - 1;
    const auto out_of_bounds = [&](std::span<const double> theta, double bound) {
        for (std::size_t i = 0; i < log_h1; ++i) {
            if (!(std::fabs(theta[i]) <= bound)) {
                return true;
            }
        }
        return false;
    };
    const auto objective = [&](std::span<const double> theta) {
        if (out_of_bounds(theta, options.coordinate_bound) || !unpack(theta, layout, candidate)) {
            return kInf;
        }
        return nll_core(candidate, returns, log_rv, scratch);
    };

    SimplexResult best = minimize(objective, pack(start, layout), options.simplex);
    if (best.converged && options.polish_steps > 0) {
        best = newton_polish(objective, std::move(best), options.polish_steps);
    }
    RgarchParams params = start;
    unpack(best.x, layout, params);
    if (best.converged && out_of_bounds(best.x, 0.999 * options.coordinate_bound)) {
        diag::warn("RGARCH estimate lies on the coordinate bound; the likelihood has no interior "
                   "optimum for this sample");
    }

    const FitDiagnostics diagnostics = make_diagnostics(
        -best.value, params.parameter_count(), returns.size(), best.converged, best.iterations);
    if (!best.converged || !std::isfinite(best.value)) {
        throw FitFailure<RgarchParams, FitDiagnostics>(
            "RGARCH maximum likelihood did not converge", params, diagnostics);
    }
    return RgarchFit{params, diagnostics};
}

RgarchOrder select_rgarch_order(std::span<const double> returns, std::span<const double> rv,
                                std::span<const RgarchOrder> grid, const RgarchOptions& options) {
    if (grid.empty()) {
        throw DomainError("RGARCH order grid is empty");
    }
    std::optional<RgarchOrder> best;
    double best_aic = kInf;
    for (const RgarchOrder& order : grid) {
        try {
            const RgarchFit fit = fit_rgarch(returns, rv, std::nullopt, options, order);
            if (fit.diagnostics.aic < best_aic) {
                best_aic = fit.diagnostics.aic;
                best = order;
            }
        } catch (const EstimationError&) {
        }
    }
    if (!best) {
        throw EstimationError("RGARCH order selection: every candidate order failed to fit");
    }
    return *best;
}

double rgarch_rv_mean(const RgarchParams& params, double log_h) noexcept {
    return std::exp(params.xi + params.phi * log_h +
                    0.5 * (params.tau * params.tau + params.sigma_u2));
}

double forecast_rgarch(const RgarchParams& params, double last_log_h, double last_log_rv) {
    if (params.p() != 1 || params.q() != 1) {
        throw DomainError("forecast_rgarch takes an order (1,1) model");
    }
    if (!std::isfinite(last_log_h) || !std::isfinite(last_log_rv)) {
        throw DomainError("RGARCH forecast inputs must be finite");
    }
    const double log_h = params.omega + params.beta[0] * last_log_h + params.alpha[0] * last_log_rv;
    return rgarch_rv_mean(params, log_h);
}

}  // namespace rvkit::models
