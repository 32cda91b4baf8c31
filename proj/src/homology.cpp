#include "topo/homology.hpp"

#include "topo/errors.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <tuple>

namespace topo {

bool filtration_less(const FiltrationSimplex& a, const FiltrationSimplex& b)
{
    return std::tie(a.value, a.dim, a.vertices) < std::tie(b.value, b.dim, b.vertices);
}

std::vector<PersistencePair> PersistenceDiagram::of_dim(int dim) const
{
    std::vector<PersistencePair> out;
    std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out),
                 [dim](const PersistencePair& p) { return p.dim == dim; });
    return out;
}

std::size_t PersistenceDiagram::count(int dim) const
{
    return static_cast<std::size_t>(std::count_if(
        pairs.begin(), pairs.end(), [dim](const PersistencePair& p) { return p.dim == dim; }));
}

namespace {

using Index = std::uint32_t;

struct Edge {
    Index a;
    Index b;
    double value;
};

// Edges in filtration order: ascending value, ties broken lexicographically.
std::vector<Edge> sorted_edges(const DistanceMatrix& distances)
{
    const auto n = static_cast<Index>(distances.size());
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Index a = 0; a < n; ++a) {
        for (Index b = a + 1; b < n; ++b) {
            edges.push_back({a, b, distances(a, b)});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        return std::tie(x.value, x.a, x.b) < std::tie(y.value, y.a, y.b);
    });
    return edges;
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0)
    {
        std::iota(parent_.begin(), parent_.end(), Index{0});
    }

    Index find(Index x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(Index x, Index y)
    {
        x = find(x);
        y = find(y);
        if (x == y) {
            return false;
        }
        if (rank_[x] < rank_[y]) {
            std::swap(x, y);
        }
        parent_[y] = x;
        if (rank_[x] == rank_[y]) {
            ++rank_[x];
        }
        return true;
    }

private:
    std::vector<Index> parent_;
    std::vector<std::uint8_t> rank_;
};

// Marks the edges (by filtration position) that merge two components.
std::vector<bool> kruskal_negative_edges(const std::vector<Edge>& edges, std::size_t n)
{
    UnionFind components(n);
    std::vector<bool> negative(edges.size(), false);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        negative[e] = components.unite(edges[e].a, edges[e].b);
    }
    return negative;
}

double zero_persistence_cutoff(const DistanceMatrix& distances)
{
    return kZeroPersistenceRelative * distances.diameter();
}

void sort_pairs(std::vector<PersistencePair>& pairs)
{
    std::sort(pairs.begin(), pairs.end());
}

} // namespace

std::vector<FiltrationSimplex> vr_filtration(const DistanceMatrix& distances, int max_dim)
{
    if (max_dim != 1 && max_dim != 2) {
        throw ValidationError("max_dim must be 1 or 2");
    }
    const auto n = static_cast<Index>(distances.size());
    std::vector<FiltrationSimplex> simplices;
    for (Index a = 0; a < n; ++a) {
        simplices.push_back({{a, 0, 0}, 0, 0.0});
    }
    for (Index a = 0; a < n; ++a) {
        for (Index b = a + 1; b < n; ++b) {
            simplices.push_back({{a, b, 0}, 1, distances(a, b)});
        }
    }
    if (max_dim == 2) {
        for (Index a = 0; a < n; ++a) {
            for (Index b = a + 1; b < n; ++b) {
                for (Index c = b + 1; c < n; ++c) {
                    const double value =
                        std::max({distances(a, b), distances(a, c), distances(b, c)});
                    simplices.push_back({{a, b, c}, 2, value});
                }
            }
        }
    }
    std::sort(simplices.begin(), simplices.end(), filtration_less);
    return simplices;
}

std::vector<PersistencePair> h0_persistence(const DistanceMatrix& distances)
{
    const std::size_t n = distances.size();
    const auto edges = sorted_edges(distances);
    UnionFind components(n);
    std::vector<PersistencePair> pairs;
    pairs.reserve(n);
    for (const Edge& e : edges) {
        if (components.unite(e.a, e.b)) {
            pairs.push_back({0, 0.0, e.value});
            if (pairs.size() + 1 == n) {
                break;
            }
        }
    }
    pairs.push_back({0, 0.0, std::numeric_limits<double>::infinity()});
    sort_pairs(pairs);
    return pairs;
}

std::vector<PersistencePair> h1_persistence(const DistanceMatrix& distances)
{
    const auto n = static_cast<Index>(distances.size());
    const auto edges = sorted_edges(distances);

    // Filtration position of every edge, addressed by its endpoints.
    std::vector<Index> edge_pos(static_cast<std::size_t>(n) * n, 0);
    for (Index e = 0; e < edges.size(); ++e) {
        edge_pos[edges[e].a * n + edges[e].b] = e;
    }

    struct Triangle {
        std::array<Index, 3> v;
        double value;
    };
    std::vector<Triangle> triangles;
    triangles.reserve(static_cast<std::size_t>(n) * (n - 1) * (n - 2) / 6);
    for (Index a = 0; a < n; ++a) {
        for (Index b = a + 1; b < n; ++b) {
            for (Index c = b + 1; c < n; ++c) {
                const double value = std::max({distances(a, b), distances(a, c), distances(b, c)});
                triangles.push_back({{a, b, c}, value});
            }
        }
    }
    std::sort(triangles.begin(), triangles.end(), [](const Triangle& x, const Triangle& y) {
        return std::tie(x.value, x.v) < std::tie(y.value, y.v);
    });

    // Rows of edges that kill a component can never be pivots in this matrix
    // and are dropped from every column before reduction. A 1-cycle is
    // determined by its coefficients on the non-tree edges, and each of those
    // spans a fundamental cycle made of earlier edges, so the pivot structure
    // is unchanged.
    const auto negative = kruskal_negative_edges(edges, n);

    const double cutoff = zero_persistence_cutoff(distances);
    constexpr Index kNone = static_cast<Index>(-1);
    std::vector<Index> pivot_owner(edges.size(), kNone);
    std::vector<std::vector<Index>> reduced(triangles.size());
    std::vector<PersistencePair> pairs;
    std::vector<Index> scratch;

    for (Index t = 0; t < triangles.size(); ++t) {
        const auto& v = triangles[t].v;
        std::vector<Index> column;
        for (Index face : {edge_pos[v[0] * n + v[1]], edge_pos[v[0] * n + v[2]],
                           edge_pos[v[1] * n + v[2]]}) {
            if (!negative[face]) {
                column.push_back(face);
            }
        }
        std::sort(column.begin(), column.end());

        while (!column.empty() && pivot_owner[column.back()] != kNone) {
            const auto& other = reduced[pivot_owner[column.back()]];
            scratch.clear();
            std::set_symmetric_difference(column.begin(), column.end(), other.begin(),
                                          other.end(), std::back_inserter(scratch));
            column.swap(scratch);
        }
        if (column.empty()) {
            continue;
        }
        const Index pivot = column.back();
        pivot_owner[pivot] = t;
        const double birth = edges[pivot].value;
        const double death = triangles[t].value;
        if (death - birth > cutoff) {
            pairs.push_back({1, birth, death});
        }
        reduced[t] = std::move(column);
    }
    sort_pairs(pairs);
    return pairs;
}

PersistenceDiagram diagram(const DistanceMatrix& distances)
{
    PersistenceDiagram out;
    out.point_count = distances.size();
    out.diameter = distances.diameter();
    out.pairs = h0_persistence(distances);
    auto loops = h1_persistence(distances);
    out.pairs.insert(out.pairs.end(), loops.begin(), loops.end());
    sort_pairs(out.pairs);
    return out;
}

PersistenceDiagram diagram(const PointCloud& cloud)
{
    return diagram(distance_matrix(cloud));
}

PersistenceDiagram oracle_persistence(const DistanceMatrix& distances)
{
    const std::size_t n = distances.size();
    if (n > kOracleMaxPoints) {
        throw GuardError("oracle_persistence is limited to " + std::to_string(kOracleMaxPoints) +
                         " points, got " + std::to_string(n));
    }

    struct Cell {
        std::vector<std::size_t> vertices;
        double value;
    };
    std::vector<Cell> cells;
    for (std::size_t a = 0; a < n; ++a) {
        cells.push_back({{a}, 0.0});
        for (std::size_t b = a + 1; b < n; ++b) {
            cells.push_back({{a, b}, distances(a, b)});
            for (std::size_t c = b + 1; c < n; ++c) {
                double value = distances(a, b);
                if (distances(a, c) > value) value = distances(a, c);
                if (distances(b, c) > value) value = distances(b, c);
                cells.push_back({{a, b, c}, value});
            }
        }
    }
    std::stable_sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
        if (x.value != y.value) return x.value < y.value;
        if (x.vertices.size() != y.vertices.size()) return x.vertices.size() < y.vertices.size();
        return x.vertices < y.vertices;
    });

    // Dense boundary matrix: matrix[col][row] over GF(2).
    const std::size_t m = cells.size();
    std::vector<std::vector<char>> matrix(m, std::vector<char>(m, 0));
    for (std::size_t col = 0; col < m; ++col) {
        const auto& verts = cells[col].vertices;
        if (verts.size() < 2) {
            continue;
        }
        for (std::size_t skip = 0; skip < verts.size(); ++skip) {
            std::vector<std::size_t> face;
            for (std::size_t k = 0; k < verts.size(); ++k) {
                if (k != skip) face.push_back(verts[k]);
            }
            for (std::size_t row = 0; row < m; ++row) {
                if (cells[row].vertices == face) {
                    matrix[col][row] = 1;
                    break;
                }
            }
        }
    }

    auto low = [&](std::size_t col) -> long {
        for (std::size_t row = m; row-- > 0;) {
            if (matrix[col][row]) return static_cast<long>(row);
        }
        return -1;
    };

    // Plain left-to-right reduction: add any earlier column with the same
    // lowest row until the lowest row is unique or the column vanishes.
    std::vector<long> lows(m, -1);
    for (std::size_t j = 0; j < m; ++j) {
        lows[j] = low(j);
        bool changed = true;
        while (changed && lows[j] >= 0) {
            changed = false;
            for (std::size_t k = 0; k < j; ++k) {
                if (lows[k] == lows[j]) {
                    for (std::size_t row = 0; row < m; ++row) {
                        matrix[j][row] ^= matrix[k][row];
                    }
                    lows[j] = low(j);
                    changed = true;
                    break;
                }
            }
        }
    }

    const double cutoff = kZeroPersistenceRelative * distances.diameter();
    std::vector<bool> is_birth_of_pair(m, false);
    PersistenceDiagram out;
    out.point_count = n;
    out.diameter = distances.diameter();
    for (std::size_t j = 0; j < m; ++j) {
        const long i = lows[j];
        if (i < 0) continue;
        is_birth_of_pair[static_cast<std::size_t>(i)] = true;
        const int dim = static_cast<int>(cells[static_cast<std::size_t>(i)].vertices.size()) - 1;
        const double birth = cells[static_cast<std::size_t>(i)].value;
        const double death = cells[j].value;
        if (dim == 0 || death - birth > cutoff) {
            out.pairs.push_back({dim, birth, death});
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        const int dim = static_cast<int>(cells[j].vertices.size()) - 1;
        if (dim <= 1 && lows[j] < 0 && !is_birth_of_pair[j]) {
            out.pairs.push_back({dim, cells[j].value, std::numeric_limits<double>::infinity()});
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

} // namespace topo
