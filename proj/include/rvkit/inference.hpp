#pragma once

#include "rvkit/losses.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rvkit::stats {

/// Bartlett bandwidth floor(4 (n / 100)^(2/9)).
[[nodiscard]] std::size_t auto_bandwidth(std::size_t n) noexcept;

struct HacEstimate {
    double variance = 0.0;
    std::size_t lags = 0;
    /// Set when the raw estimate was <= 0 and `variance` holds the floor.
    bool degenerate = false;
};

inline constexpr double kVarianceFloor = 1e-300;

/// Newey-West long-run variance gamma_0 + 2 sum_j (1 - j/(L+1)) gamma_j with
/// autocovariances divided by n. Requires x.size() >= 10; throws
/// DegenerateError when x is constant.
[[nodiscard]] HacEstimate newey_west(std::span<const double> x,
                                     std::optional<std::size_t> lags = std::nullopt);
[[nodiscard]] double newey_west_lrv(std::span<const double> x,
                                    std::optional<std::size_t> lags = std::nullopt);

/// Standard normal upper tail 1 - Phi(x).
[[nodiscard]] double normal_sf(double x) noexcept;
/// Chi-square upper tail with `dof` degrees of freedom.
[[nodiscard]] double chi_square_sf(double x, double dof);

struct DmResult {
    double statistic = 0.0;
    /// 1 - Phi(DM): small when model A has the larger loss.
    double p_one_sided = 0.0;
    double p_two_sided = 0.0;
    std::size_t n = 0;
    std::size_t hac_lags = 0;
    /// Zero-variance differential; statistic and p-values are NaN.
    bool degenerate = false;
};

inline constexpr std::size_t kMinTestLength = 30;

/// DM on d_t = loss_a_t - loss_b_t. Requires equal kinds, lengths >= 30 and
/// matching dates when both series carry them.
[[nodiscard]] DmResult dm_test(const loss::LossSeries& loss_a, const loss::LossSeries& loss_b,
                               std::optional<std::size_t> lags = std::nullopt);

enum class GwInstruments { constant, lagged_differential };

struct GwResult {
    double statistic = 0.0;
    double p_value = 0.0;
    std::size_t k = 1;
    bool degenerate = false;
};

/// `constant`: P d_bar^2 / sigma_NW^2 against chi2(1), the square of the DM
/// statistic. `lagged_differential`: with h_{t-1} = (1, d_{t-1}) and
/// Z_t = h_{t-1} d_t, (P - 1) times the uncentred R^2 of regressing 1 on Z_t,
/// against chi2(2). Throws DomainError on a singular instrument moment matrix.
[[nodiscard]] GwResult gw_test(const loss::LossSeries& loss_a, const loss::LossSeries& loss_b,
                               GwInstruments instruments = GwInstruments::constant,
                               std::optional<std::size_t> lags = std::nullopt);

struct BootstrapConfig {
    std::size_t replications = 2000;
    double expected_block_length = 12.0;
    std::uint64_t seed = 0;
    /// Worker threads for the replications; results do not depend on it.
    std::size_t threads = 1;
};

inline constexpr std::size_t kMinReplications = 100;

/// Indices of replication `rep` of a circular stationary bootstrap. Each
/// replication draws from its own stream derived from (seed, rep).
[[nodiscard]] std::vector<std::size_t> bootstrap_replication(std::size_t n,
                                                             const BootstrapConfig& config,
                                                             std::size_t rep);

/// All replications. Requires n >= 2, replications >= 100 and an expected
/// block length > 1.
[[nodiscard]] std::vector<std::vector<std::size_t>> stationary_bootstrap(
    std::size_t n, const BootstrapConfig& config);

enum class McsStatistic { range, max };

struct McsResult {
    /// Superior set, in input order.
    std::vector<std::string> retained;
    /// Models removed at the requested level with their MCS p-values.
    std::vector<std::pair<std::string, double>> eliminated;
    /// MCS p-value of every model, in full elimination order (the last is 1).
    std::vector<std::pair<std::string, double>> mcs_p;
};

/// Hansen-Lunde-Nason model confidence set. The elimination sequence runs
/// until one model is left; running maxima of the equivalence-test p-values
/// are the MCS p-values and the superior set keeps p >= 1 - level.
/// Requires >= 2 models with equal lengths and distinct ids, level in (0.5, 1).
[[nodiscard]] McsResult mcs(std::span<const loss::LossSeries> losses, const BootstrapConfig& config,
                            double level, McsStatistic statistic = McsStatistic::range);

}  // namespace rvkit::stats
