#pragma once

#include <cstddef>

namespace rvkit::models {

struct FitDiagnostics {
    double loglik = 0.0;
    double aic = 0.0;  // 2k - 2 loglik
    std::size_t n_obs = 0;
    bool converged = false;
    int iterations = 0;
};

[[nodiscard]] inline FitDiagnostics make_diagnostics(double loglik, std::size_t parameter_count,
                                                     std::size_t n_obs, bool converged,
                                                     int iterations) noexcept {
    return FitDiagnostics{loglik, 2.0 * static_cast<double>(parameter_count) - 2.0 * loglik, n_obs,
                          converged, iterations};
}

/// Half-open range [begin, end) of 0-based observation indices.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
};

}  // namespace rvkit::models
