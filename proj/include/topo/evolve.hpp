#pragma once

#include "topo/errors.hpp"
#include "topo/metrics.hpp"
#include "topo/pointcloud.hpp"
#include "topo/tsloss.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace topo {

/// Quadratic pull towards a fixed cloud: weight * ||P - target||_F^2.
/// Stands in for the task loss when no language model is attached.
struct AnchorSurrogate {
    PointCloud target;
    double weight = 1.0;
};

struct SgdOptimizer {
    // Halve the step until the total loss does not increase.
    bool backtracking = false;
};

struct AdamOptimizer {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

using Optimizer = std::variant<AdamOptimizer, SgdOptimizer>;

struct EvolveConfig {
    std::size_t steps = 300;
    double learning_rate = 1e-3;
    std::size_t snapshot_every = 20;
    LossConfig loss;
    std::optional<AnchorSurrogate> surrogate;
    Optimizer optimizer = AdamOptimizer{};
    double noise_floor = 0.0;

    void validate(const PointCloud& initial) const;
};

struct TrajectoryRecord {
    std::size_t step = 0;
    PointCloud cloud;
    double total_loss = 0.0;
    double ts_loss = 0.0;
    double surrogate_loss = 0.0;
    double l_h0 = 0.0;
    double l_h1 = 0.0;
    TopologySummary summary;
};

/// Raised when a run cannot continue. Carries every record produced so far;
/// the last one describes the last valid step before the failure.
class EvolveError : public NumericError {
public:
    enum class Kind { coincident_points, divergence };

    EvolveError(Kind kind, const std::string& what, std::vector<TrajectoryRecord> records)
        : NumericError(what), kind_(kind), records_(std::move(records))
    {
    }

    Kind kind() const { return kind_; }
    const std::vector<TrajectoryRecord>& records() const { return records_; }

private:
    Kind kind_;
    std::vector<TrajectoryRecord> records_;
};

/// Anchor loss and its value for an arbitrary cloud (0 without a surrogate).
double surrogate_loss(const PointCloud& cloud, const std::optional<AnchorSurrogate>& surrogate);

/// Runs `steps` optimiser iterations on surrogate + L_ts. tau/alpha defaults
/// are resolved once from the initial cloud and held fixed for the run.
/// Records are taken at step 0, every `snapshot_every` steps and at the end.
std::vector<TrajectoryRecord> descend(const PointCloud& initial, const EvolveConfig& config);

struct MetricsTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_csv() const;
};

/// Column names of the trajectory metrics table, in order.
const std::vector<std::string>& trajectory_columns();

std::vector<double> metrics_row(std::size_t step, const TopologySummary& summary, double ts_loss,
                                double total_loss);

MetricsTable trajectory_metrics(const std::vector<TrajectoryRecord>& records);

/// Parses a CSV with a header row into a table (used for stored metrics).
MetricsTable parse_metrics_csv(const std::string& body);

} // namespace topo
