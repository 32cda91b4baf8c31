#include "topo/stats.hpp"

#include "topo/errors.hpp"
#include "topo/text.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace topo {

std::vector<double> average_ranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

namespace {

bool is_constant(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Doubled ranks are integers even with ties, so the exact distribution of the
// rank sum is a count over integer sums. ways[k][s] is the number of k-subsets
// of the pooled sample whose doubled rank sum is s.
double exact_two_sided_p(const std::vector<double>& pooled_ranks, std::size_t n_a, double u_obs)
{
    const std::size_t total = pooled_ranks.size();
    std::vector<long> doubled(total);
    long max_sum = 0;
    for (std::size_t i = 0; i < total; ++i) {
        doubled[i] = std::lround(2.0 * pooled_ranks[i]);
        max_sum += doubled[i];
    }
    std::vector<std::vector<double>> ways(n_a + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t i = 0; i < total; ++i) {
        for (std::size_t k = std::min(n_a, i + 1); k >= 1; --k) {
            for (long s = max_sum; s >= doubled[i]; --s) {
                ways[k][s] += ways[k - 1][s - doubled[i]];
            }
        }
    }
    const double n_b = static_cast<double>(total - n_a);
    const double mean_u = 0.5 * static_cast<double>(n_a) * n_b;
    const double offset = 0.5 * static_cast<double>(n_a) * static_cast<double>(n_a + 1);
    const double observed = std::abs(u_obs - mean_u);
    double hits = 0.0;
    double count = 0.0;
    for (long s = 0; s <= max_sum; ++s) {
        const double w = ways[n_a][s];
        if (w == 0.0) continue;
        count += w;
        const double u = 0.5 * static_cast<double>(s) - offset;
        if (std::abs(u - mean_u) >= observed - 1e-9) {
            hits += w;
        }
    }
    return std::min(1.0, hits / count);
}

double normal_two_sided_p(const std::vector<double>& pooled_values, std::size_t n_a, double u_obs)
{
    const double na = static_cast<double>(n_a);
    const double nb = static_cast<double>(pooled_values.size() - n_a);
    const double big_n = na + nb;
    std::vector<double> sorted(pooled_values);
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double variance = na * nb / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if (!(variance > 0.0)) {
        return 1.0;
    }
    const double mean_u = 0.5 * na * nb;
    const double deviation = std::max(0.0, std::abs(u_obs - mean_u) - 0.5);
    const double z = deviation / std::sqrt(variance);
    const boost::math::normal_distribution<double> normal;
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(normal, z)));
}

} // namespace

CorrelationResult spearman(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw InputError("spearman: series lengths differ");
    }
    if (x.size() < 3) {
        throw InputError("spearman: need at least 3 observations");
    }
    if (is_constant(x) || is_constant(y)) {
        throw UndefinedError("spearman: correlation undefined for a constant series");
    }
    CorrelationResult out;
    out.n = x.size();
    out.rho = pearson(average_ranks(x), average_ranks(y));
    const double dof = static_cast<double>(out.n) - 2.0;
    if (std::abs(out.rho) >= 1.0) {
        out.p_value = 0.0;
        return out;
    }
    const double t = out.rho * std::sqrt(dof / (1.0 - out.rho * out.rho));
    const boost::math::students_t_distribution<double> dist(dof);
    out.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
    return out;
}

RankTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                              PValueMethod method)
{
    if (a.empty() || b.empty()) {
        throw InputError("mann_whitney_u: both samples must be non-empty");
    }
    RankTestResult out;
    out.n_a = a.size();
    out.n_b = b.size();
    for (double x : a) {
        for (double y : b) {
            out.u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
        }
    }
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());

    const bool exact = method == PValueMethod::exact ||
                       (method == PValueMethod::automatic && pooled.size() <= kExactMannWhitneyLimit);
    out.p_value = exact ? exact_two_sided_p(average_ranks(pooled), a.size(), out.u)
                        : normal_two_sided_p(pooled, a.size(), out.u);
    return out;
}

std::vector<CorrelationRow> correlate_trajectory(const MetricsTable& metrics,
                                                 std::span<const double> accuracy)
{
    if (accuracy.size() != metrics.rows.size()) {
        throw InputError("accuracy has " + std::to_string(accuracy.size()) +
                         " values but the metrics table has " +
                         std::to_string(metrics.rows.size()) + " rows");
    }
    std::vector<double> sorted(accuracy.begin(), accuracy.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median =
        m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

    std::vector<CorrelationRow> rows;
    for (std::size_t c = 0; c < metrics.columns.size(); ++c) {
        if (metrics.columns[c] == "step") {
            continue;
        }
        CorrelationRow row;
        row.metric = metrics.columns[c];
        std::vector<double> column;
        std::vector<double> low;
        std::vector<double> high;
        for (std::size_t r = 0; r < metrics.rows.size(); ++r) {
            const double v = metrics.rows[r][c];
            column.push_back(v);
            (accuracy[r] <= median ? low : high).push_back(v);
        }
        try {
            row.spearman = spearman(column, accuracy);
        } catch (const UndefinedError&) {
            row.spearman.reset();
        }
        if (!low.empty() && !high.empty()) {
            row.rank_test = mann_whitney_u(low, high);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string correlation_report_csv(const std::vector<CorrelationRow>& rows)
{
    std::string out = "metric,rho,rho_p,U,U_p\n";
    for (const auto& row : rows) {
        out += row.metric;
        if (row.spearman) {
            out += "," + text::format_real(row.spearman->rho) + "," +
                   text::format_real(row.spearman->p_value);
        } else {
            out += ",N/A,N/A";
        }
        if (row.rank_test) {
            out += "," + text::format_real(row.rank_test->u) + "," +
                   text::format_real(row.rank_test->p_value);
        } else {
            out += ",N/A,N/A";
        }
        out += '\n';
    }
    return out;
}

} // namespace topo
