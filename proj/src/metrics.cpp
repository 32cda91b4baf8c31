#include "topo/metrics.hpp"

#include "topo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace topo {

namespace {

std::vector<double> finite_lifespans(const PersistenceDiagram& diagram, std::optional<int> dim)
{
    std::vector<double> out;
    for (const auto& p : diagram.pairs) {
        if (!p.essential() && (!dim || p.dim == *dim)) {
            out.push_back(p.lifespan());
        }
    }
    return out;
}

} // namespace

double lifespan_entropy(std::span<const double> lifespans)
{
    if (lifespans.empty()) {
        throw UndefinedError("persistence entropy needs at least one finite pair");
    }
    double total = 0.0;
    for (double l : lifespans) {
        total += l;
    }
    if (!(total > 0.0)) {
        throw UndefinedError("persistence entropy undefined: total lifespan is zero");
    }
    double entropy = 0.0;
    for (double l : lifespans) {
        if (l > 0.0) {
            const double p = l / total;
            entropy -= p * std::log(p);
        }
    }
    // Rounding can leave a tiny negative value for a single dominant bar.
    return std::max(entropy, 0.0);
}

double persistence_entropy(const PersistenceDiagram& diagram)
{
    return lifespan_entropy(finite_lifespans(diagram, std::nullopt));
}

std::optional<double> persistence_entropy(const PersistenceDiagram& diagram, int dim)
{
    const auto lifespans = finite_lifespans(diagram, dim);
    try {
        return lifespan_entropy(lifespans);
    } catch (const UndefinedError&) {
        return std::nullopt;
    }
}

LifespanStats lifespan_stats(const PersistenceDiagram& diagram, int dim)
{
    const auto lifespans = finite_lifespans(diagram, dim);
    if (lifespans.empty()) {
        return {};
    }
    double sum = 0.0;
    double max = 0.0;
    for (double l : lifespans) {
        sum += l;
        max = std::max(max, l);
    }
    return {sum / static_cast<double>(lifespans.size()), max};
}

FeatureCounts feature_counts(const PersistenceDiagram& diagram, double noise_floor)
{
    if (!(noise_floor >= 0.0 && noise_floor < 1.0)) {
        throw ValidationError("noise_floor must lie in [0, 1)");
    }
    FeatureCounts counts;
    counts.h0 = diagram.count(0);
    const double floor = noise_floor * diagram.diameter;
    for (const auto& p : diagram.pairs) {
        if (p.dim == 1 && p.lifespan() > floor) {
            ++counts.h1;
        }
    }
    return counts;
}

double mean_nearest_neighbor(const DistanceMatrix& distances)
{
    const std::size_t n = distances.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                nearest = std::min(nearest, distances(i, j));
            }
        }
        sum += nearest;
    }
    return sum / static_cast<double>(n);
}

DensityMetrics density_metrics(const PointCloud& cloud, const PersistenceDiagram& diagram)
{
    const double mean_nn = mean_nearest_neighbor(distance_matrix(cloud));
    if (!(mean_nn > 0.0)) {
        throw UndefinedError("point density undefined: mean nearest-neighbour distance is zero");
    }
    const auto counts = feature_counts(diagram, 0.0);
    return {static_cast<double>(counts.h1) / static_cast<double>(cloud.size()), 1.0 / mean_nn};
}

TopologySummary summarize(const PointCloud& cloud, const PersistenceDiagram& diagram,
                          double noise_floor)
{
    TopologySummary s;
    const auto counts = feature_counts(diagram, noise_floor);
    s.h0_count = counts.h0;
    s.h1_count = counts.h1;
    const auto h0 = lifespan_stats(diagram, 0);
    const auto h1 = lifespan_stats(diagram, 1);
    s.avg_life_h0 = h0.avg;
    s.avg_life_h1 = h1.avg;
    s.max_life = std::max(h0.max, h1.max);
    s.persistence_entropy = persistence_entropy(diagram);
    s.entropy_h0 = persistence_entropy(diagram, 0);
    s.entropy_h1 = persistence_entropy(diagram, 1);
    const auto density = density_metrics(cloud, diagram);
    s.h1_density = density.h1_density;
    s.nn_density = density.nn_density;
    return s;
}

TopologySummary summarize(const PointCloud& cloud, double noise_floor)
{
    return summarize(cloud, diagram(cloud), noise_floor);
}

} // namespace topo
