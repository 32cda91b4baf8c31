#pragma once

#include "topo/pointcloud.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace topo {

/// A vertex, edge or triangle of the Vietoris-Rips filtration. Unused vertex
/// slots are zero; `vertices[0..dim]` is strictly increasing.
struct FiltrationSimplex {
    std::array<std::uint32_t, 3> vertices{};
    int dim = 0;
    double value = 0.0;

    bool operator==(const FiltrationSimplex&) const = default;
};

/// Filtration order: (value, dimension, lexicographic vertices).
bool filtration_less(const FiltrationSimplex& a, const FiltrationSimplex& b);

struct PersistencePair {
    int dim = 0;
    double birth = 0.0;
    double death = std::numeric_limits<double>::infinity();

    double lifespan() const { return death - birth; }
    bool essential() const { return death == std::numeric_limits<double>::infinity(); }

    auto operator<=>(const PersistencePair&) const = default;
};

/// H0 and H1 pairs sorted by (dim, birth, death), together with the size and
/// diameter of the cloud they came from.
struct PersistenceDiagram {
    std::vector<PersistencePair> pairs;
    std::size_t point_count = 0;
    double diameter = 0.0;

    std::vector<PersistencePair> of_dim(int dim) const;
    std::size_t count(int dim) const;
};

/// All vertices and edges, plus triangles when max_dim == 2, in filtration order.
std::vector<FiltrationSimplex> vr_filtration(const DistanceMatrix& distances, int max_dim);

/// Connected-component pairs by union-find over ascending edges: n - 1 finite
/// pairs whose deaths are the MST edge weights, plus the essential pair.
std::vector<PersistencePair> h0_persistence(const DistanceMatrix& distances);

/// Loop pairs from the GF(2) reduction of the triangle boundary matrix.
/// Pairs with death - birth <= 1e-12 * diameter are dropped.
std::vector<PersistencePair> h1_persistence(const DistanceMatrix& distances);

PersistenceDiagram diagram(const DistanceMatrix& distances);
PersistenceDiagram diagram(const PointCloud& cloud);

/// Reference persistence: builds its own simplex list and reduces the full
/// dense boundary matrix of every simplex without any optimisation. Refuses
/// clouds with more than `kOracleMaxPoints` points.
inline constexpr std::size_t kOracleMaxPoints = 12;
PersistenceDiagram oracle_persistence(const DistanceMatrix& distances);

/// Relative threshold under which H1 pairs are treated as zero-persistence.
inline constexpr double kZeroPersistenceRelative = 1e-12;

} // namespace topo
