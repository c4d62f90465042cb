#include "rvkit/models/har.hpp"

#include "rvkit/errors.hpp"
#include "rvkit/simd/kernels.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace rvkit::models {

HarRegressors build_har_regressors(std::span<const double> values, std::size_t t) {
    if (t < kHarMonthlyLags || t > values.size()) {
        throw DomainError("HAR regressors need " + std::to_string(kHarMonthlyLags) +
                          " prior observations, have " +
                          std::to_string(std::min(t, values.size())));
    }
    HarRegressors r;
    r.daily = values[t - 1];
    r.weekly = simd::sum(values.subspan(t - kHarWeeklyLags, kHarWeeklyLags)) /
               static_cast<double>(kHarWeeklyLags);
    r.monthly = simd::sum(values.subspan(t - kHarMonthlyLags, kHarMonthlyLags)) /
                static_cast<double>(kHarMonthlyLags);
    return r;
}

HarRegressors build_har_regressors(const RvSeries& series, std::size_t t) {
    const std::vector<double> rv = series.rv_values();
    return build_har_regressors(rv, t);
}

HarCoefficients fit_har_regression(std::span<const double> target, std::span<const double> source,
                                   IndexRange range, FitDiagnostics* diagnostics) {
    if (range.end > target.size() || range.end > source.size()) {
        throw DomainError("HAR fit range exceeds series length");
    }
    const std::size_t first = range.begin + kHarMonthlyLags;
    const std::size_t rows = range.end > first ? range.end - first : 0;
    if (rows < kHarMinRows) {
        throw DomainError("HAR fit needs " + std::to_string(kHarMinRows) +
                          " usable rows after the 22-day warm-up, have " + std::to_string(rows));
    }

    Eigen::MatrixXd design(static_cast<Eigen::Index>(rows), 4);
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t t = first + i;
        const HarRegressors r = build_har_regressors(source, t);
        const auto row = static_cast<Eigen::Index>(i);
        design(row, 0) = 1.0;
        design(row, 1) = r.daily;
        design(row, 2) = r.weekly;
        design(row, 3) = r.monthly;
        y(row) = target[t];
    }

    // Column scaling makes the rank threshold independent of the data's units.
    Eigen::Vector4d scale;
    for (Eigen::Index j = 0; j < 4; ++j) {
        const double norm = design.col(j).norm();
        scale(j) = norm > 0.0 ? norm : 1.0;
    }
    const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(1e-10);
    if (qr.rank() < 4) {
        throw EstimationError("HAR design matrix is rank deficient (collinear regressors; rank " +
                              std::to_string(qr.rank()) + " of 4)");
    }
    const Eigen::Vector4d beta = qr.solve(y).cwiseQuotient(scale);
    const Eigen::VectorXd resid = y - design * beta;
    const double ssr = resid.squaredNorm();
    const double n = static_cast<double>(rows);

    HarCoefficients coef;
    coef.omega = beta(0);
    coef.beta_d = beta(1);
    coef.beta_w = beta(2);
    coef.beta_m = beta(3);
    coef.resid_var = ssr / (n - 4.0);

    if (diagnostics != nullptr) {
        const double sigma2 = ssr / n;
        const double loglik =
            sigma2 > 0.0 ? -0.5 * n * (std::log(2.0 * std::numbers::pi) + std::log(sigma2) + 1.0)
                         : std::numeric_limits<double>::infinity();
        *diagnostics = make_diagnostics(loglik, 5, rows, true, 0);
    }
    return coef;
}

HarFit fit_har(std::span<const double> rv, IndexRange range) {
    HarFit fit;
    static_cast<HarCoefficients&>(fit.params) = fit_har_regression(rv, rv, range, &fit.diagnostics);
    return fit;
}

HarFit fit_har(const RvSeries& series, IndexRange range) {
    const std::vector<double> rv = series.rv_values();
    return fit_har(rv, range);
}

CharFit fit_char(const RvSeries& series, IndexRange range, CharTarget target) {
    if (range.end > series.size()) {
        throw DomainError("CHAR fit range exceeds series length");
    }
    std::vector<double> bpv(series.size(), 0.0);
    for (std::size_t i = range.begin; i < range.end; ++i) {
        const auto& obs = series[i];
        if (!obs.bpv) {
            throw DomainError(series.symbol() + ": CHAR needs bpv, missing on " + obs.date.iso());
        }
        bpv[i] = *obs.bpv;
    }
    const std::vector<double> rv = series.rv_values();
    CharFit fit;
    fit.params.target = target;
    static_cast<HarCoefficients&>(fit.params) = fit_har_regression(
        target == CharTarget::rv ? std::span<const double>{rv} : std::span<const double>{bpv}, bpv,
        range, &fit.diagnostics);
    return fit;
}

double forecast_har(const HarCoefficients& params, const HarRegressors& regressors) noexcept {
    return params.omega + params.beta_d * regressors.daily + params.beta_w * regressors.weekly +
           params.beta_m * regressors.monthly;
}

}  // namespace rvkit::models
