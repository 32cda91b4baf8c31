#include "topo/evolve.hpp"

#include "topo/text.hpp"

#include <cmath>

namespace topo {

void EvolveConfig::validate(const PointCloud& initial) const
{
    if (steps < 1) {
        throw ValidationError("steps must be >= 1");
    }
    if (snapshot_every < 1) {
        throw ValidationError("snapshot_every must be >= 1");
    }
    if (!(std::isfinite(learning_rate) && learning_rate > 0.0)) {
        throw ValidationError("learning_rate must be positive and finite");
    }
    loss.validate();
    if (surrogate) {
        if (surrogate->target.size() != initial.size() || surrogate->target.dim() != initial.dim()) {
            throw DimensionError("anchor target shape does not match the initial cloud");
        }
        if (!(std::isfinite(surrogate->weight) && surrogate->weight >= 0.0)) {
            throw ValidationError("anchor weight must be finite and nonnegative");
        }
    }
    if (const auto* adam = std::get_if<AdamOptimizer>(&optimizer)) {
        if (!(adam->beta1 >= 0.0 && adam->beta1 < 1.0 && adam->beta2 >= 0.0 && adam->beta2 < 1.0 &&
              adam->eps > 0.0)) {
            throw ValidationError("adam requires beta1, beta2 in [0, 1) and eps > 0");
        }
    }
}

double surrogate_loss(const PointCloud& cloud, const std::optional<AnchorSurrogate>& surrogate)
{
    if (!surrogate) {
        return 0.0;
    }
    double sum = 0.0;
    const auto a = cloud.matrix().values();
    const auto b = surrogate->target.matrix().values();
    for (std::size_t k = 0; k < a.size(); ++k) {
        sum += (a[k] - b[k]) * (a[k] - b[k]);
    }
    return surrogate->weight * sum;
}

namespace {

struct Evaluation {
    double ts = 0.0;
    double surrogate = 0.0;
    double l_h0 = 0.0;
    double l_h1 = 0.0;
    Matrix gradient;

    double total() const { return surrogate + ts; }
};

Evaluation evaluate(const PointCloud& cloud, const EvolveConfig& config, const LossConfig& loss)
{
    auto breakdown = ts_loss(cloud, loss);
    Evaluation e;
    e.ts = breakdown.l_ts;
    e.l_h0 = breakdown.l_h0;
    e.l_h1 = breakdown.l_h1;
    e.surrogate = surrogate_loss(cloud, config.surrogate);
    e.gradient = std::move(breakdown.gradient);
    if (config.surrogate) {
        auto g = e.gradient.values();
        const auto x = cloud.matrix().values();
        const auto t = config.surrogate->target.matrix().values();
        for (std::size_t k = 0; k < g.size(); ++k) {
            g[k] += 2.0 * config.surrogate->weight * (x[k] - t[k]);
        }
    }
    return e;
}

double total_value(const PointCloud& cloud, const EvolveConfig& config, const LossConfig& loss)
{
    return surrogate_loss(cloud, config.surrogate) + ts_loss_value(cloud, loss);
}

TrajectoryRecord make_record(std::size_t step, const PointCloud& cloud, const Evaluation& e,
                             double noise_floor)
{
    return {step, cloud, e.total(), e.ts, e.surrogate, e.l_h0, e.l_h1, summarize(cloud, noise_floor)};
}

// Builds a cloud from raw coordinates; nullopt when any coordinate blew up.
std::optional<PointCloud> checked_cloud(Matrix m)
{
    for (double v : m.values()) {
        if (!std::isfinite(v)) {
            return std::nullopt;
        }
    }
    return PointCloud(std::move(m));
}

Matrix step_along(const PointCloud& cloud, const Matrix& direction, double scale)
{
    Matrix next = cloud.matrix();
    auto x = next.values();
    const auto g = direction.values();
    for (std::size_t k = 0; k < x.size(); ++k) {
        x[k] -= scale * g[k];
    }
    return next;
}

} // namespace

std::vector<TrajectoryRecord> descend(const PointCloud& initial, const EvolveConfig& config)
{
    config.validate(initial);
    {
        std::size_t a = 0;
        std::size_t b = 0;
        if (find_coincident(distance_matrix(initial), a, b)) {
            throw EvolveError(EvolveError::Kind::coincident_points,
                              "step 0: points " + std::to_string(a) + " and " + std::to_string(b) +
                                  " coincide in the initial cloud",
                              {});
        }
    }
    const LossConfig loss = config.loss.resolved(initial);

    std::vector<TrajectoryRecord> records;
    PointCloud cloud = initial;
    const std::size_t size = initial.size() * initial.dim();
    std::vector<double> first_moment(size, 0.0);
    std::vector<double> second_moment(size, 0.0);

    std::optional<Evaluation> previous;
    std::size_t previous_step = 0;
    std::optional<PointCloud> previous_cloud;

    auto abort = [&](EvolveError::Kind kind, const std::string& why, std::size_t step) {
        if (previous && (records.empty() || records.back().step != previous_step)) {
            records.push_back(make_record(previous_step, *previous_cloud, *previous, config.noise_floor));
        }
        throw EvolveError(kind, "step " + std::to_string(step) + ": " + why, std::move(records));
    };

    for (std::size_t step = 0;; ++step) {
        Evaluation current;
        try {
            current = evaluate(cloud, config, loss);
        } catch (const SingularGradientError& e) {
            abort(EvolveError::Kind::coincident_points, e.what(), step);
        } catch (const ValidationError& e) {
            abort(EvolveError::Kind::divergence, e.what(), step);
        }
        if (!std::isfinite(current.total())) {
            abort(EvolveError::Kind::divergence, "loss is not finite", step);
        }

        if (step == 0 || step % config.snapshot_every == 0 || step == config.steps) {
            records.push_back(make_record(step, cloud, current, config.noise_floor));
        }
        if (step == config.steps) {
            break;
        }

        Matrix next;
        if (const auto* sgd = std::get_if<SgdOptimizer>(&config.optimizer)) {
            double rate = config.learning_rate;
            next = step_along(cloud, current.gradient, rate);
            if (sgd->backtracking) {
                constexpr int kMaxHalvings = 60;
                int halvings = 0;
                while (true) {
                    auto candidate = checked_cloud(next);
                    if (candidate && total_value(*candidate, config, loss) <= current.total()) {
                        break;
                    }
                    if (++halvings > kMaxHalvings) {
                        next = cloud.matrix();
                        break;
                    }
                    rate *= 0.5;
                    next = step_along(cloud, current.gradient, rate);
                }
            }
        } else {
            const auto& adam = std::get<AdamOptimizer>(config.optimizer);
            const double t = static_cast<double>(step + 1);
            const double correction1 = 1.0 - std::pow(adam.beta1, t);
            const double correction2 = 1.0 - std::pow(adam.beta2, t);
            next = cloud.matrix();
            auto x = next.values();
            const auto g = current.gradient.values();
            for (std::size_t k = 0; k < size; ++k) {
                first_moment[k] = adam.beta1 * first_moment[k] + (1.0 - adam.beta1) * g[k];
                second_moment[k] = adam.beta2 * second_moment[k] + (1.0 - adam.beta2) * g[k] * g[k];
                const double m_hat = first_moment[k] / correction1;
                const double v_hat = second_moment[k] / correction2;
                x[k] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + adam.eps);
            }
        }

        auto advanced = checked_cloud(std::move(next));
        if (!advanced) {
            previous = std::move(current);
            previous_step = step;
            previous_cloud = cloud;
            abort(EvolveError::Kind::divergence, "coordinates became non-finite", step + 1);
        }
        previous = std::move(current);
        previous_step = step;
        previous_cloud = std::move(cloud);
        cloud = std::move(*advanced);
    }
    return records;
}

const std::vector<std::string>& trajectory_columns()
{
    static const std::vector<std::string> columns = {
        "step",       "h0_count",   "h1_count", "avg_life_h0", "avg_life_h1", "persistence_entropy",
        "h1_density", "nn_density", "ts_loss",  "total_loss"};
    return columns;
}

std::vector<double> metrics_row(std::size_t step, const TopologySummary& summary, double ts_loss,
                                double total_loss)
{
    return {static_cast<double>(step),
            static_cast<double>(summary.h0_count),
            static_cast<double>(summary.h1_count),
            summary.avg_life_h0,
            summary.avg_life_h1,
            summary.persistence_entropy,
            summary.h1_density,
            summary.nn_density,
            ts_loss,
            total_loss};
}

MetricsTable trajectory_metrics(const std::vector<TrajectoryRecord>& records)
{
    if (records.empty()) {
        throw InputError("trajectory_metrics needs at least one record");
    }
    MetricsTable table{trajectory_columns(), {}};
    for (const auto& r : records) {
        table.rows.push_back(metrics_row(r.step, r.summary, r.ts_loss, r.total_loss));
    }
    return table;
}

std::string MetricsTable::to_csv() const
{
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out += (c ? "," : "") + columns[c];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += text::format_real(row[c]);
        }
        out += '\n';
    }
    return out;
}

MetricsTable parse_metrics_csv(const std::string& body)
{
    const auto all = text::lines(body);
    if (all.empty()) {
        throw FormatError("metrics CSV is empty");
    }
    MetricsTable table;
    for (auto name : text::split(all.front(), ',')) {
        table.columns.emplace_back(name);
    }
    for (std::size_t li = 1; li < all.size(); ++li) {
        if (all[li].empty()) continue;
        const auto fields = text::split(all[li], ',');
        if (fields.size() != table.columns.size()) {
            throw FormatError("row " + std::to_string(li + 1) + ": expected " +
                              std::to_string(table.columns.size()) + " columns");
        }
        std::vector<double> row;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = text::parse_real(fields[c], true);
            if (!v) {
                throw ParseError("row " + std::to_string(li + 1) + ", column " +
                                 std::to_string(c + 1) + ": not a number");
            }
            row.push_back(*v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace topo
