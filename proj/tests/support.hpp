#pragma once

// Test-only oracles. Nothing here calls into the code paths it checks.

#include "topo/pointcloud.hpp"
#include "topo/tsloss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace topo::testing {

inline PointCloud uniform_cloud(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    Matrix m(n, d);
    for (double& v : m.values()) {
        v = u(rng);
    }
    return PointCloud(std::move(m));
}

inline PointCloud unit_square()
{
    return PointCloud::from_rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

inline PointCloud circle(std::size_t n, double radius = 1.0)
{
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        rows.push_back({radius * std::cos(t), radius * std::sin(t)});
    }
    return PointCloud::from_rows(rows);
}

// Vertices of the standard simplex scaled to side `side` in R^n.
inline PointCloud regular_simplex(std::size_t n, double side = 1.0)
{
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = side / std::sqrt(2.0);
    }
    return PointCloud(std::move(m));
}

inline double pair_distance(const PointCloud& c, std::size_t i, std::size_t j)
{
    double s = 0.0;
    for (std::size_t k = 0; k < c.dim(); ++k) {
        s += (c(i, k) - c(j, k)) * (c(i, k) - c(j, k));
    }
    return std::sqrt(s);
}

// Kruskal with its own disjoint-set forest (no ranks, path halving).
inline std::vector<double> kruskal_weights(const PointCloud& c)
{
    struct E {
        double w;
        std::size_t a, b;
    };
    std::vector<E> edges;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) edges.push_back({pair_distance(c, i, j), i, j});
    std::sort(edges.begin(), edges.end(), [](const E& x, const E& y) { return x.w < y.w; });
    std::vector<std::size_t> parent(c.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<double> out;
    for (const auto& e : edges) {
        const auto ra = root(e.a), rb = root(e.b);
        if (ra != rb) {
            parent[ra] = rb;
            out.push_back(e.w);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Straight transcription of the loss with plain exponentials, recomputing
// every distance from coordinates. tau/alpha must be set in `config`.
inline double naive_ts_loss(const PointCloud& c, const LossConfig& config)
{
    const std::size_t n = c.size();
    const double tau = *config.tau;
    const double alpha = *config.alpha;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) sum += std::exp(-pair_distance(c, i, j) / tau);
        s[i] = -tau * std::log(sum);
    }
    double mean = 0.0;
    for (double v : s) mean += v / static_cast<double>(n);
    double l0 = 0.0;
    for (double v : s) l0 += (v - mean) * (v - mean) / static_cast<double>(n);

    double zl = 0.0, zh = 0.0, nl = 0.0, nh = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = pair_distance(c, i, j);
            zl += std::exp(-alpha * d);
            nl += d * std::exp(-alpha * d);
            zh += std::exp(alpha * d);
            nh += d * std::exp(alpha * d);
        }
    const double delta = nl / zl;
    const double zeta = nh / zh;
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = pair_distance(c, i, j);
            const double lo = std::max(0.0, delta - d);
            const double hi = std::max(0.0, d - zeta);
            l1 += config.lambda_repel * lo * lo + config.lambda_attract * hi * hi;
        }
    l1 /= static_cast<double>(n * n);
    return config.lambda_ts * (config.beta_h0 * l0 + config.beta_h1 * l1);
}

// Central differences of ts_loss_value with step h on every coordinate.
// `config` must have tau/alpha fixed so they do not move with the cloud.
inline Matrix finite_difference_gradient(const PointCloud& c, const LossConfig& config, double h)
{
    Matrix g(c.size(), c.dim());
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t k = 0; k < c.dim(); ++k) {
            Matrix plus = c.matrix();
            Matrix minus = c.matrix();
            plus(i, k) += h;
            minus(i, k) -= h;
            g(i, k) = (ts_loss_value(PointCloud(plus), config) - ts_loss_value(PointCloud(minus), config)) /
                      (2.0 * h);
        }
    }
    return g;
}

// Largest coordinate error relative to max(|analytic|, |fd|, 1e-3 * ||fd||_inf).
// The floor keeps near-zero partials from dominating through rounding noise.
inline double gradient_relative_error(const Matrix& analytic, const Matrix& fd)
{
    double norm = 0.0;
    for (double v : fd.values()) norm = std::max(norm, std::abs(v));
    double worst = 0.0;
    for (std::size_t k = 0; k < fd.values().size(); ++k) {
        const double a = analytic.values()[k];
        const double f = fd.values()[k];
        const double denom = std::max({std::abs(a), std::abs(f), 1e-3 * norm, 1e-300});
        worst = std::max(worst, std::abs(a - f) / denom);
    }
    return worst;
}

// Exhaustive two-sided Mann-Whitney p-value: every subset of the pooled
// sample of size n_a (as a bitmask) is scored by counting pairwise wins.
inline double exhaustive_mann_whitney_p(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t total = pooled.size();
    const std::size_t na = a.size();
    auto u_of = [&](unsigned mask) {
        double u = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            if (!(mask >> i & 1u)) continue;
            for (std::size_t j = 0; j < total; ++j) {
                if (mask >> j & 1u) continue;
                u += pooled[i] > pooled[j] ? 1.0 : (pooled[i] == pooled[j] ? 0.5 : 0.0);
            }
        }
        return u;
    };
    const double mean = 0.5 * static_cast<double>(na) * static_cast<double>(total - na);
    const double observed = std::abs(u_of((1u << na) - 1u) - mean);
    double hits = 0.0, count = 0.0;
    for (unsigned mask = 0; mask < (1u << total); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != na) continue;
        count += 1.0;
        if (std::abs(u_of(mask) - mean) >= observed - 1e-9) hits += 1.0;
    }
    return std::min(1.0, hits / count);
}

} // namespace topo::testing
