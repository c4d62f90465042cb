#include "rvkit/models/optimizer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace rvkit::models {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& f, std::span<const double> x, int& evaluations) {
    ++evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
}

double diameter(const std::vector<std::vector<double>>& simplex, std::size_t best) {
    double d = 0.0;
    for (std::size_t i = 0; i < simplex.size(); ++i) {
        if (i == best) {
            continue;
        }
        for (std::size_t j = 0; j < simplex[i].size(); ++j) {
            d = std::max(d, std::fabs(simplex[i][j] - simplex[best][j]));
        }
    }
    return d;
}

}  // namespace

SimplexResult nelder_mead(const Objective& f, std::vector<double> start,
                          const SimplexOptions& options) {
    const std::size_t n = start.size();
    if (n == 0) {
        throw std::invalid_argument("nelder_mead: empty parameter vector");
    }
    // Dimension-adaptive coefficients keep the simplex from degenerating in
    // higher dimensions.
    const double dim = static_cast<double>(n);
    const double reflect = 1.0;
    const double expand = 1.0 + 2.0 / dim;
    const double contract = 0.75 - 1.0 / (2.0 * dim);
    const double shrink = 1.0 - 1.0 / dim;

    SimplexResult result;
    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double step = start[i] != 0.0 ? options.initial_step * std::max(1.0, std::fabs(start[i]))
                                             : options.initial_step;
        simplex[i + 1][i] += step;
    }
    for (std::size_t i = 0; i <= n; ++i) {
        values[i] = safe_eval(f, simplex[i], result.evaluations);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    auto point = [&](double t, std::vector<double>& out, std::size_t worst) {
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = centroid[j] + t * (centroid[j] - simplex[worst][j]);
        }
    };

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[n - 1];

        if (std::isfinite(values[best]) && diameter(simplex, best) < options.tolerance) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                centroid[j] += simplex[i][j];
            }
        }
        for (double& c : centroid) {
            c /= dim;
        }

        point(reflect, trial, worst);
        const double f_reflect = safe_eval(f, trial, result.evaluations);
        if (f_reflect < values[best]) {
            point(reflect * expand, trial2, worst);
            const double f_expand = safe_eval(f, trial2, result.evaluations);
            if (f_expand < f_reflect) {
                simplex[worst] = trial2;
                values[worst] = f_expand;
            } else {
                simplex[worst] = trial;
                values[worst] = f_reflect;
            }
            continue;
        }
        if (f_reflect < values[second_worst]) {
            simplex[worst] = trial;
            values[worst] = f_reflect;
            continue;
        }
        if (f_reflect < values[worst]) {
            point(reflect * contract, trial2, worst);  // outside contraction
            const double f_contract = safe_eval(f, trial2, result.evaluations);
            if (f_contract <= f_reflect) {
                simplex[worst] = trial2;
                values[worst] = f_contract;
                continue;
            }
        } else {
            point(-contract, trial2, worst);  // inside contraction
            const double f_contract = safe_eval(f, trial2, result.evaluations);
            if (f_contract < values[worst]) {
                simplex[worst] = trial2;
                values[worst] = f_contract;
                continue;
            }
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                simplex[i][j] = simplex[best][j] + shrink * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = safe_eval(f, simplex[i], result.evaluations);
        }
    }

    const auto best = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    result.iterations = iter;
    return result;
}

SimplexResult minimize(const Objective& f, std::vector<double> start,
                       const SimplexOptions& options) {
    SimplexResult best = nelder_mead(f, start, options);
    int total_iterations = best.iterations;
    int total_evaluations = best.evaluations;

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> jitter(-options.restart_spread, options.restart_spread);
    for (int r = 0; r < options.restarts; ++r) {
        std::vector<double> x0 = start;
        for (double& v : x0) {
            v += jitter(rng);
        }
        SimplexResult candidate = nelder_mead(f, std::move(x0), options);
        total_iterations += candidate.iterations;
        total_evaluations += candidate.evaluations;
        if (candidate.value < best.value) {
            best = std::move(candidate);
        }
    }

    // A fresh simplex around the incumbent escapes the occasional premature
    // collapse of the previous one.
    SimplexOptions polish = options;
    polish.initial_step = std::max(options.tolerance * 1e3, options.initial_step * 0.1);
    for (int round = 0; round < 5; ++round) {
        SimplexResult candidate = nelder_mead(f, best.x, polish);
        total_iterations += candidate.iterations;
        total_evaluations += candidate.evaluations;
        const bool improved = candidate.value < best.value - 1e-12 * std::fabs(best.value);
        if (candidate.value <= best.value) {
            best = std::move(candidate);
        }
        if (!improved) {
            break;
        }
    }
    best.iterations = total_iterations;
    best.evaluations = total_evaluations;
    return best;
}

namespace {

struct LocalModel {
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    bool finite = true;
};

LocalModel local_model(const Objective& f, const std::vector<double>& x0, double f0, double step,
                       int& evaluations) {
    const std::size_t n = x0.size();
    const auto dim = static_cast<Eigen::Index>(n);
    LocalModel m{Eigen::VectorXd(dim), Eigen::MatrixXd(dim, dim)};
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h[i] = step * std::max(1.0, std::fabs(x0[i]));
    }
    std::vector<double> x = x0;
    for (std::size_t i = 0; i < n && m.finite; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        x[i] = x0[i] + h[i];
        const double fp = safe_eval(f, x, evaluations);
        x[i] = x0[i] - h[i];
        const double fm = safe_eval(f, x, evaluations);
        x[i] = x0[i];
        m.grad(ii) = (fp - fm) / (2.0 * h[i]);
        m.hess(ii, ii) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        m.finite = std::isfinite(fp) && std::isfinite(fm);
    }
    for (std::size_t i = 0; i < n && m.finite; ++i) {
        for (std::size_t j = i + 1; j < n && m.finite; ++j) {
            double corner[4];
            int k = 0;
            for (double si : {1.0, -1.0}) {
                for (double sj : {1.0, -1.0}) {
                    x[i] = x0[i] + si * h[i];
                    x[j] = x0[j] + sj * h[j];
                    corner[k++] = safe_eval(f, x, evaluations);
                }
            }
            x[i] = x0[i];
            x[j] = x0[j];
            const double hij = (corner[0] - corner[1] - corner[2] + corner[3]) / (4.0 * h[i] * h[j]);
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            m.hess(ii, jj) = hij;
            m.hess(jj, ii) = hij;
            m.finite = std::isfinite(hij);
        }
    }
    return m;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

SimplexResult newton_polish(const Objective& f, SimplexResult start, int max_steps, double step) {
    SimplexResult current = std::move(start);
    if (!std::isfinite(current.value) || current.x.empty()) {
        return current;
    }
    const std::size_t n = current.x.size();
    LocalModel model = local_model(f, current.x, current.value, step, current.evaluations);

    for (int it = 0; it < max_steps && model.finite; ++it) {
        // Near the optimum f differences sink below rounding, so a step that
        // keeps f level within that noise but shrinks the gradient is taken too.
        const double noise = 1e-12 * std::max(1.0, std::fabs(current.value));
        const double scale = std::max(model.hess.diagonal().cwiseAbs().maxCoeff(), 1.0);
        bool accepted = false;
        double damping = 0.0;
        for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
            Eigen::MatrixXd damped = model.hess;
            damped.diagonal().array() += damping;
            damping = damping == 0.0 ? 1e-8 * scale : damping * 10.0;
            const Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
            if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all()) {
                continue;
            }
            const Eigen::VectorXd delta = ldlt.solve(model.grad);
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = current.x[i] - delta(static_cast<Eigen::Index>(i));
            }
            const double fx = safe_eval(f, x, current.evaluations);
            if (!(fx <= current.value + noise)) {
                continue;
            }
            LocalModel next = local_model(f, x, fx, step, current.evaluations);
            if (!next.finite) {
                continue;
            }
            if (fx < current.value - noise || max_abs(next.grad) < max_abs(model.grad)) {
                current.x = std::move(x);
                current.value = fx;
                model = std::move(next);
                accepted = true;
            }
        }
        ++current.iterations;
        if (!accepted) {
            break;
        }
    }
    return current;
}

std::vector<double> stationary_from_unconstrained(std::span<const double> u) {
    const std::size_t p = u.size();
    std::vector<double> c(p, 0.0), previous(p, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        const double r = std::tanh(u[k]);
        previous = c;
        c[k] = r;
        for (std::size_t j = 0; j < k; ++j) {
            c[j] = previous[j] - r * previous[k - 1 - j];
        }
    }
    return c;
}

namespace {

// Step-down (inverse Levinson) recursion; returns partial autocorrelations.
std::vector<double> partials_of(std::span<const double> c) {
    const std::size_t p = c.size();
    std::vector<double> cur(c.begin(), c.end()), partials(p, 0.0);
    for (std::size_t k = p; k-- > 0;) {
        const double r = cur[k];
        partials[k] = r;
        if (std::fabs(r) >= 1.0) {
            return partials;
        }
        std::vector<double> next(k);
        for (std::size_t j = 0; j < k; ++j) {
            next[j] = (cur[j] + r * cur[k - 1 - j]) / (1.0 - r * r);
        }
        cur.assign(next.begin(), next.end());
    }
    return partials;
}

}  // namespace

std::vector<double> unconstrained_from_stationary(std::span<const double> c) {
    std::vector<double> partials = partials_of(c);
    for (double& r : partials) {
        if (!(std::fabs(r) < 1.0)) {
            throw std::invalid_argument("polynomial is not stationary");
        }
        r = std::atanh(r);
    }
    return partials;
}

bool is_stationary(std::span<const double> c) {
    const std::vector<double> partials = partials_of(c);
    return std::all_of(partials.begin(), partials.end(),
                       [](double r) { return std::fabs(r) < 1.0; });
}

}  // namespace rvkit::models
