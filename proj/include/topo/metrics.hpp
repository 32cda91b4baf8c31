#pragma once

#include "topo/homology.hpp"
#include "topo/pointcloud.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace topo {

struct TopologySummary {
    std::size_t h0_count = 0;
    std::size_t h1_count = 0;
    double avg_life_h0 = 0.0;
    double avg_life_h1 = 0.0;
    double max_life = 0.0;
    double persistence_entropy = 0.0; // nats, finite pairs of both dimensions
    double h1_density = 0.0;
    double nn_density = 0.0;
    // Per-dimension entropies; empty when the dimension has no finite
    // lifespan mass.
    std::optional<double> entropy_h0;
    std::optional<double> entropy_h1;
};

struct LifespanStats {
    double avg = 0.0;
    double max = 0.0;
};

struct FeatureCounts {
    std::size_t h0 = 0;
    std::size_t h1 = 0;
};

struct DensityMetrics {
    double h1_density = 0.0;
    double nn_density = 0.0;
};

/// Shannon entropy (natural log) of the normalised lifespans. Zero-length
/// bars contribute nothing. Throws UndefinedError when the total lifespan is
/// zero or there are no bars.
double lifespan_entropy(std::span<const double> lifespans);

/// Entropy over every finite pair; the essential bar is excluded.
double persistence_entropy(const PersistenceDiagram& diagram);

/// Entropy restricted to one dimension, or nullopt when it is undefined.
std::optional<double> persistence_entropy(const PersistenceDiagram& diagram, int dim);

/// Mean and max lifespan over the finite pairs of one dimension; (0, 0) if none.
LifespanStats lifespan_stats(const PersistenceDiagram& diagram, int dim);

/// h1 counts loops whose lifespan exceeds noise_floor * diameter.
FeatureCounts feature_counts(const PersistenceDiagram& diagram, double noise_floor = 0.0);

/// h1 count per point and reciprocal mean nearest-neighbour distance.
DensityMetrics density_metrics(const PointCloud& cloud, const PersistenceDiagram& diagram);

/// Mean over points of the exact nearest-neighbour distance.
double mean_nearest_neighbor(const DistanceMatrix& distances);

TopologySummary summarize(const PointCloud& cloud, double noise_floor = 0.0);
TopologySummary summarize(const PointCloud& cloud, const PersistenceDiagram& diagram,
                          double noise_floor = 0.0);

} // namespace topo
