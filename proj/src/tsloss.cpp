#include "topo/tsloss.hpp"

#include "topo/errors.hpp"
#include "topo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace topo {

namespace {

bool finite_nonnegative(double v)
{
    return std::isfinite(v) && v >= 0.0;
}

double mean_off_diagonal(const DistanceMatrix& distances)
{
    const std::size_t n = distances.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                sum += distances(i, j);
            }
        }
    }
    return sum / static_cast<double>(n * (n - 1));
}

// Normalised exp(sign * alpha * D_ij) over ordered off-diagonal pairs,
// shifted by the extreme distance before exponentiating.
std::vector<double> quantile_weights(const DistanceMatrix& distances, double alpha, double sign)
{
    const std::size_t n = distances.size();
    double shift = sign > 0 ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                shift = sign > 0 ? std::max(shift, distances(i, j)) : std::min(shift, distances(i, j));
            }
        }
    }
    std::vector<double> w(n * n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                w[i * n + j] = std::exp(sign * alpha * (distances(i, j) - shift));
                total += w[i * n + j];
            }
        }
    }
    for (double& x : w) {
        x /= total;
    }
    return w;
}

double weighted_distance(const DistanceMatrix& distances, const std::vector<double>& w)
{
    const std::size_t n = distances.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                sum += w[i * n + j] * distances(i, j);
            }
        }
    }
    return sum;
}

void require_two_points(const DistanceMatrix& distances)
{
    if (distances.size() < 2) {
        throw DimensionError("loss needs at least 2 points");
    }
}

} // namespace

void LossConfig::validate() const
{
    if (tau && !(std::isfinite(*tau) && *tau > 0.0)) {
        throw ValidationError("tau must be positive and finite");
    }
    if (alpha && !(std::isfinite(*alpha) && *alpha > 0.0)) {
        throw ValidationError("alpha must be positive and finite");
    }
    for (double w : {lambda_ts, beta_h0, beta_h1, lambda_repel, lambda_attract}) {
        if (!finite_nonnegative(w)) {
            throw ValidationError("loss weights must be finite and nonnegative");
        }
    }
}

LossConfig LossConfig::resolved(const DistanceMatrix& distances) const
{
    validate();
    LossConfig out = *this;
    if (!out.tau) {
        out.tau = kDefaultTauFactor * mean_nearest_neighbor(distances);
    }
    if (!out.alpha) {
        out.alpha = kDefaultAlphaNumerator / mean_off_diagonal(distances);
    }
    out.validate();
    return out;
}

LossConfig LossConfig::resolved(const PointCloud& cloud) const
{
    return resolved(distance_matrix(cloud));
}

std::vector<double> softmin_distances(const DistanceMatrix& distances, double tau)
{
    require_two_points(distances);
    if (!(tau > 0.0)) {
        throw ValidationError("tau must be positive");
    }
    const std::size_t n = distances.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                nearest = std::min(nearest, distances(i, j));
            }
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                sum += std::exp(-(distances(i, j) - nearest) / tau);
            }
        }
        s[i] = nearest - tau * std::log(sum);
    }
    return s;
}

double loss_h0(std::span<const double> s)
{
    if (s.size() < 2) {
        throw DimensionError("loss_h0 needs at least 2 values");
    }
    double mean = 0.0;
    for (double v : s) {
        mean += v;
    }
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (double v : s) {
        var += (v - mean) * (v - mean);
    }
    return var / static_cast<double>(s.size());
}

SoftQuantiles soft_quantiles(const DistanceMatrix& distances, double alpha)
{
    require_two_points(distances);
    if (!(alpha > 0.0)) {
        throw ValidationError("alpha must be positive");
    }
    const auto low = quantile_weights(distances, alpha, -1.0);
    const auto high = quantile_weights(distances, alpha, +1.0);
    return {weighted_distance(distances, low), weighted_distance(distances, high)};
}

double loss_h1(const DistanceMatrix& distances, double delta, double zeta, double lambda_repel,
               double lambda_attract)
{
    require_two_points(distances);
    const std::size_t n = distances.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            const double close = std::max(0.0, delta - distances(i, j));
            const double far = std::max(0.0, distances(i, j) - zeta);
            sum += lambda_repel * close * close + lambda_attract * far * far;
        }
    }
    return sum / static_cast<double>(n * n);
}

namespace {

LossBreakdown evaluate(const DistanceMatrix& distances, const LossConfig& raw)
{
    const LossConfig config = raw.resolved(distances);
    LossBreakdown out;
    out.tau = *config.tau;
    out.alpha = *config.alpha;
    out.s = softmin_distances(distances, out.tau);
    double mean = 0.0;
    for (double v : out.s) {
        mean += v;
    }
    out.s_bar = mean / static_cast<double>(out.s.size());
    out.l_h0 = loss_h0(out.s);
    const auto q = soft_quantiles(distances, out.alpha);
    out.delta = q.delta;
    out.zeta = q.zeta;
    out.l_h1 = loss_h1(distances, q.delta, q.zeta, config.lambda_repel, config.lambda_attract);
    out.l_ts = config.lambda_ts * (config.beta_h0 * out.l_h0 + config.beta_h1 * out.l_h1);
    return out;
}

// dL_ts/dD_ij for every ordered pair, then chained through D_ij = |x_i - x_j|.
Matrix gradient_from_terms(const PointCloud& cloud, const DistanceMatrix& distances,
                           const LossConfig& config, const LossBreakdown& terms)
{
    const std::size_t n = cloud.size();
    const std::size_t d = cloud.dim();
    const double nd = static_cast<double>(n);
    const double scale_h0 = config.lambda_ts * config.beta_h0;
    const double scale_h1 = config.lambda_ts * config.beta_h1 / (nd * nd);

    std::vector<double> sens(n * n, 0.0);

    // H0: dL/ds_i = (2/n)(s_i - s_bar); ds_i/dD_ij is the softmin weight of j in row i.
    if (scale_h0 != 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double coeff = scale_h0 * 2.0 / nd * (terms.s[i] - terms.s_bar);
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) nearest = std::min(nearest, distances(i, j));
            }
            double total = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) total += std::exp(-(distances(i, j) - nearest) / terms.tau);
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    const double p = std::exp(-(distances(i, j) - nearest) / terms.tau) / total;
                    sens[i * n + j] += coeff * p;
                }
            }
        }
    }

    // H1: direct hinge terms plus the paths through delta and zeta.
    if (scale_h1 != 0.0) {
        double d_delta = 0.0;
        double d_zeta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double close = std::max(0.0, terms.delta - distances(i, j));
                const double far = std::max(0.0, distances(i, j) - terms.zeta);
                sens[i * n + j] += scale_h1 * (-2.0 * config.lambda_repel * close +
                                               2.0 * config.lambda_attract * far);
                d_delta += scale_h1 * 2.0 * config.lambda_repel * close;
                d_zeta -= scale_h1 * 2.0 * config.lambda_attract * far;
            }
        }
        const double alpha = terms.alpha;
        if (d_delta != 0.0) {
            const auto low = quantile_weights(distances, alpha, -1.0);
            for (std::size_t k = 0; k < n * n; ++k) {
                const std::size_t i = k / n;
                const std::size_t j = k % n;
                if (i != j) {
                    sens[k] += d_delta * low[k] * (1.0 - alpha * (distances(i, j) - terms.delta));
                }
            }
        }
        if (d_zeta != 0.0) {
            const auto high = quantile_weights(distances, alpha, +1.0);
            for (std::size_t k = 0; k < n * n; ++k) {
                const std::size_t i = k / n;
                const std::size_t j = k % n;
                if (i != j) {
                    sens[k] += d_zeta * high[k] * (1.0 + alpha * (distances(i, j) - terms.zeta));
                }
            }
        }
    }

    Matrix grad(n, d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double g = sens[i * n + j] + sens[j * n + i];
            if (g == 0.0) continue;
            const double inv = g / distances(i, j);
            for (std::size_t k = 0; k < d; ++k) {
                const double u = (cloud(i, k) - cloud(j, k)) * inv;
                grad(i, k) += u;
                grad(j, k) -= u;
            }
        }
    }
    return grad;
}

void require_distinct(const DistanceMatrix& distances)
{
    std::size_t i = 0;
    std::size_t j = 0;
    if (find_coincident(distances, i, j)) {
        throw SingularGradientError("points " + std::to_string(i) + " and " + std::to_string(j) +
                                    " coincide; the loss is not differentiable there");
    }
}

} // namespace

LossBreakdown ts_loss_terms(const PointCloud& cloud, const LossConfig& config)
{
    return evaluate(distance_matrix(cloud), config);
}

double ts_loss_value(const PointCloud& cloud, const LossConfig& config)
{
    return ts_loss_terms(cloud, config).l_ts;
}

LossBreakdown ts_loss(const PointCloud& cloud, const LossConfig& config)
{
    const auto distances = distance_matrix(cloud);
    require_distinct(distances);
    auto out = evaluate(distances, config);
    out.gradient = gradient_from_terms(cloud, distances, config.resolved(distances), out);
    return out;
}

Matrix ts_loss_gradient(const PointCloud& cloud, const LossConfig& config)
{
    return ts_loss(cloud, config).gradient;
}

} // namespace topo
