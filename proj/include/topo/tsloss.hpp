#pragma once

#include "topo/pointcloud.hpp"

#include <optional>
#include <span>
#include <vector>

namespace topo {

/// Weights and temperatures of the topological soft-prompt loss
///
///   L_ts = lambda_ts * (beta_h0 * L_H0 + beta_h1 * L_H1).
///
/// tau and alpha are optional; unset values are resolved from the cloud by
/// resolved(): tau = 0.1 * mean nearest-neighbour distance and
/// alpha = 10 / mean off-diagonal distance.
struct LossConfig {
    std::optional<double> tau;
    std::optional<double> alpha;
    double lambda_ts = 1.0;
    double beta_h0 = 1.0;
    double beta_h1 = 1.0;
    double lambda_repel = 1.0;
    double lambda_attract = 1.0;

    /// Throws ValidationError on non-positive tau/alpha or negative weights.
    void validate() const;

    /// Copy with tau/alpha filled in from the given cloud where unset.
    LossConfig resolved(const DistanceMatrix& distances) const;
    LossConfig resolved(const PointCloud& cloud) const;
};

inline constexpr double kDefaultTauFactor = 0.1;
inline constexpr double kDefaultAlphaNumerator = 10.0;

struct SoftQuantiles {
    double delta = 0.0;
    double zeta = 0.0;
};

struct LossBreakdown {
    std::vector<double> s;
    double s_bar = 0.0;
    double delta = 0.0;
    double zeta = 0.0;
    double l_h0 = 0.0;
    double l_h1 = 0.0;
    double l_ts = 0.0;
    double tau = 0.0;
    double alpha = 0.0;
    Matrix gradient; // d L_ts / d points, n x d
};

/// s_i = -tau * log sum_{j != i} exp(-D_ij / tau), evaluated around the row
/// minimum so that s_i <= min_{j != i} D_ij holds exactly.
std::vector<double> softmin_distances(const DistanceMatrix& distances, double tau);

/// Population variance (1/n) of the softmin distances.
double loss_h0(std::span<const double> s);

/// Exponentially weighted low/high averages of the off-diagonal distances,
/// weights exp(-alpha D) and exp(+alpha D) normalised over ordered pairs i != j.
SoftQuantiles soft_quantiles(const DistanceMatrix& distances, double alpha);

/// (1/n^2) * sum over ordered pairs i != j of
///   lambda_repel * max(0, delta - D_ij)^2 + lambda_attract * max(0, D_ij - zeta)^2.
double loss_h1(const DistanceMatrix& distances, double delta, double zeta, double lambda_repel,
               double lambda_attract);

/// Loss value and breakdown without the gradient (gradient left empty).
LossBreakdown ts_loss_terms(const PointCloud& cloud, const LossConfig& config);

/// Scalar L_ts only.
double ts_loss_value(const PointCloud& cloud, const LossConfig& config);

/// Full breakdown including the analytic gradient.
LossBreakdown ts_loss(const PointCloud& cloud, const LossConfig& config);

/// Analytic gradient of L_ts with respect to every coordinate. Differentiates
/// through the distances, the softmin values and both soft quantiles.
/// Throws SingularGradientError when two points coincide.
Matrix ts_loss_gradient(const PointCloud& cloud, const LossConfig& config);

} // namespace topo
