#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rvkit::models {

using Objective = std::function<double(std::span<const double>)>;

struct SimplexOptions {
    int max_iterations = 2000;  // per descent
    double tolerance = 1e-8;    // simplex diameter (max-norm) at convergence
    double initial_step = 0.1;
    int restarts = 3;           // random restarts after the first descent
    double restart_spread = 0.5;
    std::uint64_t seed = 20240601;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;  // summed over all descents
    int evaluations = 0;
};

/// Adaptive Nelder-Mead simplex descent from `start`. Non-finite objective
/// values are treated as +inf.
[[nodiscard]] SimplexResult nelder_mead(const Objective& f, std::vector<double> start,
                                        const SimplexOptions& options);

/// Descent from `start`, then `options.restarts` descents from uniformly
/// perturbed copies of `start` (seeded), then a fresh-simplex polish from the
/// best point until it stops improving. Reports the best point; `converged`
/// refers to the descent that produced it.
[[nodiscard]] SimplexResult minimize(const Objective& f, std::vector<double> start,
                                     const SimplexOptions& options);

/// Damped Newton iterations with a central finite-difference gradient and
/// Hessian, accepted only when they lower the objective. Used to sharpen a
/// simplex optimum; returns the input unchanged if no step helps.
[[nodiscard]] SimplexResult newton_polish(const Objective& f, SimplexResult start,
                                          int max_steps = 20, double step = 1e-5);

/// Maps unconstrained reals to the coefficients of a stationary AR polynomial
/// 1 - c_1 z - ... - c_p z^p through partial autocorrelations tanh(u_k).
[[nodiscard]] std::vector<double> stationary_from_unconstrained(std::span<const double> u);

/// Inverse of stationary_from_unconstrained; `c` must be stationary.
[[nodiscard]] std::vector<double> unconstrained_from_stationary(std::span<const double> c);

/// True when all roots of 1 - c_1 z - ... - c_p z^p lie outside the unit circle.
[[nodiscard]] bool is_stationary(std::span<const double> c);

}  // namespace rvkit::models
