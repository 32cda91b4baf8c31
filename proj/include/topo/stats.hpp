#pragma once

#include "topo/evolve.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace topo {

struct CorrelationResult {
    double rho = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

struct RankTestResult {
    double u = 0.0;
    double p_value = 1.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
};

/// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman rank correlation with a two-sided p-value from
/// t = rho * sqrt((n - 2) / (1 - rho^2)) on n - 2 degrees of freedom.
/// Throws UndefinedError if either series is constant.
CorrelationResult spearman(std::span<const double> x, std::span<const double> y);

enum class PValueMethod { automatic, exact, normal };

/// Largest pooled sample size for which `automatic` uses the exact test.
inline constexpr std::size_t kExactMannWhitneyLimit = 12;

/// U counts pairs with a > b, ties counting one half. The two-sided p-value
/// is exact (full permutation distribution of the pooled average ranks) when
/// n_a + n_b <= 12 under `automatic`, otherwise a normal approximation with
/// tie and continuity corrections.
RankTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                              PValueMethod method = PValueMethod::automatic);

struct CorrelationRow {
    std::string metric;
    std::optional<CorrelationResult> spearman; // empty for constant metrics
    std::optional<RankTestResult> rank_test;   // empty if a group is empty
};

/// Correlates every metric column (except `step`) with the accuracy series.
/// For the rank test the rows are split at the accuracy median: rows with
/// accuracy <= median form the first group, the rest the second, and U is
/// reported for the first group.
std::vector<CorrelationRow> correlate_trajectory(const MetricsTable& metrics,
                                                 std::span<const double> accuracy);

/// Report CSV with header `metric,rho,rho_p,U,U_p`; missing values are "N/A".
std::string correlation_report_csv(const std::vector<CorrelationRow>& rows);

} // namespace topo
