#include "support.hpp"

#include "topo/errors.hpp"
#include "topo/evolve.hpp"

#include <doctest.h>

#include <cmath>

using namespace topo;

TEST_CASE("single step gives two records")
{
    EvolveConfig cfg;
    cfg.steps = 1;
    const auto records = descend(gaussian_init(8, 4, 0.02, 1), cfg);
    REQUIRE(records.size() == 2);
    CHECK(records[0].step == 0);
    CHECK(records[1].step == 1);
}

TEST_CASE("record cadence")
{
    EvolveConfig cfg;
    cfg.steps = 45;
    cfg.snapshot_every = 20;
    const auto records = descend(gaussian_init(6, 3, 0.02, 2), cfg);
    REQUIRE(records.size() == 4);
    CHECK(records[0].step == 0);
    CHECK(records[1].step == 20);
    CHECK(records[2].step == 40);
    CHECK(records[3].step == 45);
    for (const auto& r : records) {
        CHECK(r.total_loss == doctest::Approx(r.surrogate_loss + r.ts_loss).epsilon(1e-12));
        CHECK(r.summary.h0_count == 6);
    }
}

TEST_CASE("anchor surrogate alone contracts geometrically under sgd")
{
    const auto start = testing::uniform_cloud(6, 3, 10);
    const auto target = testing::uniform_cloud(6, 3, 11);
    EvolveConfig cfg;
    cfg.steps = 30;
    cfg.snapshot_every = 1;
    cfg.learning_rate = 0.1;
    cfg.loss.lambda_ts = 0.0;
    cfg.surrogate = AnchorSurrogate{target, 1.5};
    cfg.optimizer = SgdOptimizer{};
    const auto records = descend(start, cfg);
    REQUIRE(records.size() == 31);
    const double rate = 1.0 - 2.0 * cfg.learning_rate * 1.5;
    for (std::size_t k = 1; k < records.size(); ++k) {
        CHECK(records[k].ts_loss == 0.0);
        CHECK(records[k].surrogate_loss < records[k - 1].surrogate_loss);
        CHECK(records[k].surrogate_loss ==
              doctest::Approx(rate * rate * records[k - 1].surrogate_loss).epsilon(1e-9));
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                const double before = records[k - 1].cloud(i, j) - target(i, j);
                const double after = records[k].cloud(i, j) - target(i, j);
                CHECK(std::abs(after - rate * before) <= 1e-9);
            }
    }
}

TEST_CASE("backtracking sgd never increases the loss")
{
    for (int seed = 0; seed < 3; ++seed) {
        EvolveConfig cfg;
        cfg.steps = 60;
        cfg.snapshot_every = 1;
        cfg.learning_rate = 10.0;
        cfg.optimizer = SgdOptimizer{true};
        const auto records = descend(gaussian_init(10, 6, 0.02, 50 + seed), cfg);
        for (std::size_t k = 1; k < records.size(); ++k) {
            CHECK(records[k].ts_loss <= records[k - 1].ts_loss);
        }
        CHECK(records.back().ts_loss < records.front().ts_loss);
    }
}

TEST_CASE("runs are bitwise deterministic")
{
    EvolveConfig cfg;
    cfg.steps = 40;
    cfg.snapshot_every = 10;
    const auto init = gaussian_init(12, 5, 0.02, 9);
    const auto a = descend(init, cfg);
    const auto b = descend(init, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].cloud == b[k].cloud);
        CHECK(a[k].total_loss == b[k].total_loss);
        CHECK(a[k].summary.persistence_entropy == b[k].summary.persistence_entropy);
    }
}

TEST_CASE("coincident points abort the run with the last valid record")
{
    EvolveConfig cfg;
    cfg.steps = 5;
    cfg.snapshot_every = 10;
    cfg.learning_rate = 0.5;
    cfg.loss.lambda_ts = 0.0;
    cfg.optimizer = SgdOptimizer{};
    cfg.surrogate = AnchorSurrogate{PointCloud::from_rows({{0, 0}, {0, 0}, {5, 5}}), 1.0};
    try {
        descend(PointCloud::from_rows({{1, 0}, {0, 1}, {5, 6}}), cfg);
        FAIL("expected EvolveError");
    } catch (const EvolveError& e) {
        CHECK(e.kind() == EvolveError::Kind::coincident_points);
        REQUIRE(e.records().size() == 1);
        CHECK(e.records().back().step == 0);
    }

    try {
        descend(PointCloud::from_rows({{1, 0}, {1, 0}}), EvolveConfig{});
        FAIL("expected EvolveError");
    } catch (const EvolveError& e) {
        CHECK(e.kind() == EvolveError::Kind::coincident_points);
        CHECK(e.records().empty());
    }
}

TEST_CASE("divergence is reported with the records so far")
{
    EvolveConfig cfg;
    cfg.steps = 50;
    cfg.snapshot_every = 1;
    cfg.learning_rate = 1e100;
    cfg.loss.lambda_ts = 0.0;
    cfg.optimizer = SgdOptimizer{};
    cfg.surrogate = AnchorSurrogate{testing::uniform_cloud(4, 2, 1), 1.0};
    try {
        descend(testing::uniform_cloud(4, 2, 2), cfg);
        FAIL("expected EvolveError");
    } catch (const EvolveError& e) {
        CHECK(e.kind() == EvolveError::Kind::divergence);
        CHECK(!e.records().empty());
        for (const auto& r : e.records()) CHECK(std::isfinite(r.total_loss));
    }
}

TEST_CASE("config validation")
{
    const auto c = gaussian_init(5, 2, 0.02, 1);
    EvolveConfig cfg;
    cfg.steps = 0;
    CHECK_THROWS_AS(descend(c, cfg), ValidationError);
    cfg = {};
    cfg.snapshot_every = 0;
    CHECK_THROWS_AS(descend(c, cfg), ValidationError);
    cfg = {};
    cfg.surrogate = AnchorSurrogate{gaussian_init(4, 2, 0.02, 1), 1.0};
    CHECK_THROWS_AS(descend(c, cfg), DimensionError);
    cfg = {};
    cfg.learning_rate = -1.0;
    CHECK_THROWS_AS(descend(c, cfg), ValidationError);
}

TEST_CASE("trajectory metrics table")
{
    EvolveConfig cfg;
    cfg.steps = 1;
    cfg.snapshot_every = 5;
    const auto records = descend(gaussian_init(7, 3, 0.02, 4), cfg);
    const auto one = trajectory_metrics({records.front()});
    REQUIRE(one.rows.size() == 1);
    CHECK(one.columns == trajectory_columns());
    CHECK(one.rows[0][0] == 0.0);
    CHECK(one.rows[0][1] == 7.0);
    CHECK(one.rows[0][5] == records.front().summary.persistence_entropy);

    const auto table = trajectory_metrics(records);
    for (const auto& row : table.rows) CHECK(row[1] == 7.0);
    const auto parsed = parse_metrics_csv(table.to_csv());
    CHECK(parsed.columns == table.columns);
    CHECK(parsed.rows == table.rows);
    CHECK_THROWS_AS(trajectory_metrics({}), InputError);
}
