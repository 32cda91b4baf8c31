#include "support.hpp"

#include "topo/errors.hpp"
#include "topo/homology.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace topo;

namespace {

std::vector<double> finite_deaths(const std::vector<PersistencePair>& pairs)
{
    std::vector<double> out;
    for (const auto& p : pairs)
        if (!p.essential()) out.push_back(p.death);
    std::sort(out.begin(), out.end());
    return out;
}

PointCloud shuffled(const PointCloud& c, std::uint64_t seed)
{
    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    Matrix m(c.size(), c.dim());
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t k = 0; k < c.dim(); ++k) m(i, k) = c(order[i], k);
    return PointCloud(m);
}

} // namespace

TEST_CASE("vr_filtration on two points")
{
    const auto f = vr_filtration(distance_matrix(PointCloud::from_rows({{0, 0}, {3, 4}})), 2);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == FiltrationSimplex{{0, 0, 0}, 0, 0.0});
    CHECK(f[1] == FiltrationSimplex{{1, 0, 0}, 0, 0.0});
    CHECK(f[2] == FiltrationSimplex{{0, 1, 0}, 1, 5.0});
}

TEST_CASE("vr_filtration triangle takes its longest edge")
{
    const auto f = vr_filtration(distance_matrix(PointCloud::from_rows({{0}, {1}, {2}})), 2);
    REQUIRE(f.back().dim == 2);
    CHECK(f.back().value == 2.0);
}

TEST_CASE("vr_filtration counts and ordering on a random cloud")
{
    const auto c = testing::uniform_cloud(8, 3, 11);
    const auto f = vr_filtration(distance_matrix(c), 2);
    CHECK(f.size() == 8 + 28 + 56);
    CHECK(vr_filtration(distance_matrix(c), 1).size() == 8 + 28);
    CHECK_THROWS_AS(vr_filtration(distance_matrix(c), 3), ValidationError);

    std::set<std::vector<std::uint32_t>> seen;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (k > 0) CHECK_FALSE(filtration_less(f[k], f[k - 1]));
        const auto& s = f[k];
        std::vector<std::uint32_t> verts(s.vertices.begin(), s.vertices.begin() + s.dim + 1);
        for (int a = 0; a + 1 <= s.dim; ++a) CHECK(verts[a] < verts[a + 1]);
        // every face already present
        if (s.dim >= 1) {
            for (int skip = 0; skip <= s.dim; ++skip) {
                std::vector<std::uint32_t> face;
                for (int a = 0; a <= s.dim; ++a)
                    if (a != skip) face.push_back(verts[a]);
                CHECK(seen.count(face) == 1);
            }
        }
        double expected = 0.0;
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = a + 1; b < verts.size(); ++b)
                expected = std::max(expected, testing::pair_distance(c, verts[a], verts[b]));
        CHECK(s.value == doctest::Approx(expected).epsilon(1e-15));
        seen.insert(verts);
    }
}

TEST_CASE("h0_persistence small cases")
{
    const auto two = h0_persistence(distance_matrix(PointCloud::from_rows({{0, 0}, {3, 4}})));
    REQUIRE(two.size() == 2);
    CHECK(two[0] == PersistencePair{0, 0.0, 5.0});
    CHECK(two[1].essential());

    const auto tri = h0_persistence(
        distance_matrix(PointCloud::from_rows({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}})));
    const auto deaths = finite_deaths(tri);
    REQUIRE(deaths.size() == 2);
    CHECK(deaths[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(deaths[1] == doctest::Approx(1.0).epsilon(1e-12));

    const auto same = h0_persistence(distance_matrix(PointCloud::from_rows({{2, 2}, {2, 2}, {2, 2}, {2, 2}})));
    CHECK(same.size() == 4);
    for (double d : finite_deaths(same)) CHECK(d == 0.0);
}

TEST_CASE("h0 deaths equal Kruskal MST weights up to n = 64")
{
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial) * 3;
        const auto c = testing::uniform_cloud(n, 1 + trial % 6, 500 + trial);
        const auto got = finite_deaths(h0_persistence(distance_matrix(c)));
        const auto want = testing::kruskal_weights(c);
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - want[k]) <= 1e-12);
    }
}

TEST_CASE("h1_persistence: any three points have no loops")
{
    for (int trial = 0; trial < 30; ++trial) {
        const auto d = distance_matrix(testing::uniform_cloud(3, 1 + trial % 4, 700 + trial));
        CHECK(h1_persistence(d).empty());
        CHECK(oracle_persistence(d).count(1) == 0);
    }
}

TEST_CASE("unit square has one loop from 1 to sqrt 2")
{
    const auto d = distance_matrix(testing::unit_square());
    const auto h1 = h1_persistence(d);
    REQUIRE(h1.size() == 1);
    CHECK(std::abs(h1[0].birth - 1.0) <= 1e-9);
    CHECK(std::abs(h1[0].death - std::sqrt(2.0)) <= 1e-9);

    const auto oracle = oracle_persistence(d).of_dim(1);
    REQUIRE(oracle.size() == 1);
    CHECK(oracle[0] == h1[0]);

    const auto full = diagram(testing::unit_square());
    CHECK(full.count(0) == 4);
    CHECK(full.count(1) == 1);
    const auto deaths = finite_deaths(full.of_dim(0));
    CHECK(deaths == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("twelve points on a circle have one dominant loop")
{
    const auto c = testing::circle(12);
    const auto dgm = diagram(c);
    CHECK(dgm.pairs == oracle_persistence(distance_matrix(c)).pairs);
    auto h1 = dgm.of_dim(1);
    REQUIRE(!h1.empty());
    std::sort(h1.begin(), h1.end(),
              [](const PersistencePair& a, const PersistencePair& b) { return a.lifespan() > b.lifespan(); });
    if (h1.size() > 1) {
        CHECK(h1[0].lifespan() >= 5.0 * h1[1].lifespan());
    }
    CHECK(h1[0].birth == doctest::Approx(2.0 * std::sin(M_PI / 12)).epsilon(1e-12));
}

TEST_CASE("diagram of two points")
{
    const auto dgm = diagram(PointCloud::from_rows({{0, 0}, {3, 4}}));
    CHECK(dgm.count(0) == 2);
    CHECK(dgm.count(1) == 0);
    CHECK(dgm.pairs == oracle_persistence(distance_matrix(PointCloud::from_rows({{0, 0}, {3, 4}}))).pairs);
    CHECK(dgm.pairs[0] == PersistencePair{0, 0.0, 5.0});
}

TEST_CASE("diagram equals the naive oracle on random clouds")
{
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(trial) % 10;
        const auto c = testing::uniform_cloud(n, 2 + trial % 5, 900 + trial);
        const auto d = distance_matrix(c);
        CHECK(diagram(d).pairs == oracle_persistence(d).pairs);
    }
}

TEST_CASE("diagram equals the oracle on tie-heavy lattice clouds")
{
    std::vector<std::vector<double>> grid;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) grid.push_back({double(x), double(y)});
    const auto d = distance_matrix(PointCloud::from_rows(grid));
    CHECK(diagram(d).pairs == oracle_persistence(d).pairs);

    std::vector<std::vector<double>> cube;
    for (int k = 0; k < 8; ++k) cube.push_back({double(k & 1), double(k >> 1 & 1), double(k >> 2 & 1)});
    const auto dc = distance_matrix(PointCloud::from_rows(cube));
    CHECK(diagram(dc).pairs == oracle_persistence(dc).pairs);
}

TEST_CASE("diagram structural invariants")
{
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(trial) * 2;
        const auto c = testing::uniform_cloud(n, 3, 1300 + trial);
        const auto d = distance_matrix(c);
        const auto dgm = diagram(d);
        CHECK(dgm.count(0) == n);
        std::size_t essential = 0;
        for (const auto& p : dgm.pairs) {
            if (p.essential()) {
                ++essential;
                CHECK(p.dim == 0);
                continue;
            }
            CHECK(p.death >= p.birth);
            CHECK(p.death <= dgm.diameter);
            if (p.dim == 0) CHECK(p.birth == 0.0);
        }
        CHECK(essential == 1);
        CHECK(std::is_sorted(dgm.pairs.begin(), dgm.pairs.end()));

        // births are edge values, deaths are triangle values
        std::set<double> edge_values;
        std::set<double> triangle_values;
        for (const auto& s : vr_filtration(d, 2)) {
            (s.dim == 1 ? edge_values : triangle_values).insert(s.value);
        }
        for (const auto& p : dgm.of_dim(1)) {
            CHECK(edge_values.count(p.birth) == 1);
            CHECK(triangle_values.count(p.death) == 1);
        }

        // permutation of rows does not change the multiset
        CHECK(diagram(shuffled(c, 77 + trial)).pairs == dgm.pairs);
    }
}

TEST_CASE("oracle refuses large clouds")
{
    CHECK_THROWS_AS(oracle_persistence(distance_matrix(testing::uniform_cloud(13, 2, 1))), GuardError);
    CHECK_NOTHROW(oracle_persistence(distance_matrix(testing::uniform_cloud(12, 2, 1))));
}
