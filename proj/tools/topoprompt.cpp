// topoprompt: persistent-homology analysis and topological-loss evolution of
// point clouds.
//
// Exit codes: 0 success, 1 runtime or numerical failure, 2 input or parse
// failure. Every command prints one `key=value ...` line on stdout;
// diagnostics go to stderr.

#include "topo/errors.hpp"
#include "topo/evolve.hpp"
#include "topo/export.hpp"
#include "topo/homology.hpp"
#include "topo/metrics.hpp"
#include "topo/pca.hpp"
#include "topo/pointcloud.hpp"
#include "topo/render.hpp"
#include "topo/stats.hpp"
#include "topo/text.hpp"
#include "topo/tsloss.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;

constexpr const char* kOutputDirEnv = "TOPOPROMPT_OUTPUT_DIR";

fs::path default_output_dir()
{
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return ".";
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw topo::IoError("cannot create directory '" + dir.string() + "': " + ec.message());
    }
}

std::string step_name(std::size_t step)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "step_%06zu", step);
    return buf;
}

// Counts arrive as text so that "3e2" is accepted like any other number.
std::size_t parse_count(const std::string& text, const char* flag)
{
    const auto value = topo::text::parse_real(text);
    if (!value || *value < 0 || std::floor(*value) != *value || *value > 1e15) {
        throw topo::ValidationError(std::string(flag) + " expects a nonnegative integer, got '" +
                                    text + "'");
    }
    return static_cast<std::size_t>(*value);
}

double parse_number(const std::string& text, const char* flag)
{
    const auto value = topo::text::parse_real(text);
    if (!value) {
        throw topo::ValidationError(std::string(flag) + " expects a number, got '" + text + "'");
    }
    return *value;
}

topo::SnapshotFormat snapshot_format(const std::string& flag, const fs::path& path)
{
    if (flag == "csv") return topo::SnapshotFormat::csv;
    if (flag == "json") return topo::SnapshotFormat::json;
    return topo::format_from_path(path);
}

void emit(const std::string& command, const std::vector<std::pair<std::string, std::string>>& kv)
{
    std::cout << "command=" << command;
    for (const auto& [k, v] : kv) {
        std::cout << ' ' << k << '=' << v;
    }
    std::cout << '\n';
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::string snapshot;
    std::string format = "auto";
    bool header = false;
    double noise_floor = 0.0;
    bool emit_loss = false;
    bool emit_gradient = false;
    std::optional<double> tau;
    std::optional<double> alpha;
};

int run_analyze(const AnalyzeArgs& args, const fs::path& out_dir)
{
    const fs::path input = args.snapshot;
    const auto cloud = topo::load_snapshot(input, snapshot_format(args.format, input),
                                           {.csv_header = args.header});
    const auto dgm = topo::diagram(cloud);
    const auto summary = topo::summarize(cloud, dgm, args.noise_floor);

    std::optional<std::string> loss_text;
    if (args.emit_loss || args.emit_gradient) {
        topo::LossConfig config;
        config.tau = args.tau;
        config.alpha = args.alpha;
        const auto resolved = config.resolved(cloud);
        const auto breakdown = args.emit_gradient ? topo::ts_loss(cloud, resolved)
                                                  : topo::ts_loss_terms(cloud, resolved);
        loss_text = topo::dump(topo::loss_json(breakdown, resolved, args.emit_gradient));
    }

    ensure_dir(out_dir);
    const auto stem = input.stem().string();
    const auto summary_path = out_dir / (stem + ".summary.json");
    const auto diagram_path = out_dir / (stem + ".diagram.csv");
    topo::text::write_file(summary_path, topo::dump(topo::summary_json(summary)));
    topo::text::write_file(diagram_path, topo::diagram_csv(dgm));
    std::vector<std::pair<std::string, std::string>> kv = {
        {"points", std::to_string(cloud.size())},
        {"dim", std::to_string(cloud.dim())},
        {"h0_count", std::to_string(summary.h0_count)},
        {"h1_count", std::to_string(summary.h1_count)},
        {"persistence_entropy", topo::text::format_real(summary.persistence_entropy)},
        {"summary", summary_path.string()},
        {"diagram", diagram_path.string()}};
    if (loss_text) {
        const auto loss_path = out_dir / (stem + ".loss.json");
        topo::text::write_file(loss_path, *loss_text);
        kv.emplace_back("loss", loss_path.string());
    }
    emit("analyze", kv);
    return kExitOk;
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
    std::string init;
    std::vector<std::string> init_gaussian;
    std::string format = "auto";
    bool header = false;
    std::string steps = "300";
    std::string snapshot_every = "20";
    double lr = 1e-3;
    std::string optimizer = "adam";
    bool backtracking = false;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double lambda_ts = 1.0;
    std::optional<double> tau;
    std::optional<double> alpha;
    double beta_h0 = 1.0;
    double beta_h1 = 1.0;
    double lambda_repel = 1.0;
    double lambda_attract = 1.0;
    std::string anchor;
    double anchor_weight = 1.0;
    double noise_floor = 0.0;
};

void write_trajectory(const std::vector<topo::TrajectoryRecord>& records, const fs::path& out_dir)
{
    ensure_dir(out_dir / "snapshots");
    std::vector<topo::ManifestEntry> manifest;
    for (const auto& r : records) {
        const auto rel = fs::path("snapshots") / (step_name(r.step) + ".csv");
        topo::write_snapshot(r.cloud, out_dir / rel, topo::SnapshotFormat::csv);
        manifest.push_back({r.step, rel.generic_string(), r.ts_loss, r.total_loss});
    }
    topo::text::write_file(out_dir / "manifest.json", topo::manifest_json(manifest));
    if (!records.empty()) {
        topo::text::write_file(out_dir / "metrics.csv", topo::trajectory_metrics(records).to_csv());
    }
}

int run_optimize(const OptimizeArgs& args, const fs::path& out_dir)
{
    if (args.init.empty() == args.init_gaussian.empty()) {
        throw topo::InputError("give exactly one of --init or --init-gaussian");
    }
    std::optional<topo::PointCloud> initial;
    if (!args.init.empty()) {
        const fs::path path = args.init;
        initial = topo::load_snapshot(path, snapshot_format(args.format, path),
                                      {.csv_header = args.header});
    } else {
        const auto& g = args.init_gaussian;
        initial = topo::gaussian_init(parse_count(g[0], "--init-gaussian n"),
                                      parse_count(g[1], "--init-gaussian d"),
                                      parse_number(g[2], "--init-gaussian sigma"),
                                      parse_count(g[3], "--init-gaussian seed"));
    }

    topo::EvolveConfig config;
    config.steps = parse_count(args.steps, "--steps");
    config.snapshot_every = parse_count(args.snapshot_every, "--snapshot-every");
    config.learning_rate = args.lr;
    config.noise_floor = args.noise_floor;
    config.loss.tau = args.tau;
    config.loss.alpha = args.alpha;
    config.loss.lambda_ts = args.lambda_ts;
    config.loss.beta_h0 = args.beta_h0;
    config.loss.beta_h1 = args.beta_h1;
    config.loss.lambda_repel = args.lambda_repel;
    config.loss.lambda_attract = args.lambda_attract;
    if (args.optimizer == "sgd") {
        config.optimizer = topo::SgdOptimizer{args.backtracking};
    } else {
        config.optimizer = topo::AdamOptimizer{args.beta1, args.beta2, args.eps};
    }
    if (!args.anchor.empty()) {
        const fs::path path = args.anchor;
        config.surrogate = topo::AnchorSurrogate{
            topo::load_snapshot(path, snapshot_format(args.format, path), {.csv_header = args.header}),
            args.anchor_weight};
    }

    std::vector<topo::TrajectoryRecord> records;
    try {
        records = topo::descend(*initial, config);
    } catch (const topo::EvolveError& e) {
        write_trajectory(e.records(), out_dir);
        std::cerr << "topoprompt optimize: run aborted: " << e.what() << " ("
                  << e.records().size() << " records written)\n";
        return kExitRuntime;
    }
    write_trajectory(records, out_dir);
    const auto& first = records.front();
    const auto& last = records.back();
    emit("optimize", {{"records", std::to_string(records.size())},
                      {"steps", std::to_string(config.steps)},
                      {"initial_ts_loss", topo::text::format_real(first.ts_loss)},
                      {"final_ts_loss", topo::text::format_real(last.ts_loss)},
                      {"initial_h1_count", std::to_string(first.summary.h1_count)},
                      {"final_h1_count", std::to_string(last.summary.h1_count)},
                      {"manifest", (out_dir / "manifest.json").string()},
                      {"metrics", (out_dir / "metrics.csv").string()}});
    return kExitOk;
}

// ---------------------------------------------------------------- trajectory

struct TrajectoryArgs {
    std::string manifest;
    double noise_floor = 0.0;
    std::string output;
    bool project_pca = false;
};

int run_trajectory(const TrajectoryArgs& args, const fs::path& out_dir)
{
    const fs::path manifest_path = args.manifest;
    const auto entries = topo::parse_manifest(topo::text::read_file(manifest_path));
    if (entries.empty()) {
        throw topo::InputError("manifest has no entries");
    }
    const auto base = manifest_path.parent_path();

    topo::MetricsTable table{topo::trajectory_columns(), {}};
    std::vector<std::pair<std::size_t, topo::Matrix>> projections;
    for (const auto& entry : entries) {
        const auto snapshot = base / entry.snapshot_path;
        if (!fs::exists(snapshot)) {
            throw topo::ReadError("snapshot for step " + std::to_string(entry.step) +
                                  " is missing: " + snapshot.string());
        }
        const auto cloud = topo::load_snapshot(snapshot, topo::format_from_path(snapshot));
        const auto summary = topo::summarize(cloud, args.noise_floor);
        table.rows.push_back(topo::metrics_row(entry.step, summary, entry.ts_loss, entry.total_loss));
        if (args.project_pca) {
            projections.emplace_back(entry.step, topo::pca_project_2d(cloud));
        }
    }

    const fs::path output = args.output.empty() ? out_dir / "trajectory_metrics.csv" : fs::path(args.output);
    if (output.has_parent_path()) {
        ensure_dir(output.parent_path());
    }
    topo::text::write_file(output, table.to_csv());
    std::vector<std::pair<std::string, std::string>> kv = {
        {"records", std::to_string(table.rows.size())}, {"metrics", output.string()}};
    if (args.project_pca) {
        const auto pca_dir = out_dir / "pca";
        ensure_dir(pca_dir);
        for (const auto& [step, m] : projections) {
            std::string body = "pc1,pc2\n";
            for (std::size_t i = 0; i < m.rows(); ++i) {
                body += topo::text::format_real(m(i, 0)) + "," + topo::text::format_real(m(i, 1)) + "\n";
            }
            topo::text::write_file(pca_dir / (step_name(step) + ".csv"), body);
        }
        kv.emplace_back("pca_dir", pca_dir.string());
    }
    emit("trajectory", kv);
    return kExitOk;
}

// ---------------------------------------------------------------- correlate

struct CorrelateArgs {
    std::string metrics;
    std::string accuracy;
    std::string output;
};

// One value per line; a non-numeric first line is taken as a header.
std::vector<double> parse_accuracy(const std::string& body)
{
    std::vector<double> out;
    const auto all = topo::text::lines(body);
    for (std::size_t li = 0; li < all.size(); ++li) {
        if (all[li].empty()) continue;
        const auto fields = topo::text::split(all[li], ',');
        if (fields.size() != 1) {
            throw topo::FormatError("accuracy row " + std::to_string(li + 1) +
                                    ": expected a single column");
        }
        const auto v = topo::text::parse_real(fields[0]);
        if (!v) {
            if (li == 0) continue;
            throw topo::ParseError("accuracy row " + std::to_string(li + 1) + ", column 1: not a number");
        }
        out.push_back(*v);
    }
    return out;
}

int run_correlate(const CorrelateArgs& args, const fs::path& out_dir)
{
    const auto table = topo::parse_metrics_csv(topo::text::read_file(args.metrics));
    const auto accuracy = parse_accuracy(topo::text::read_file(args.accuracy));
    const auto rows = topo::correlate_trajectory(table, accuracy);
    const fs::path output = args.output.empty() ? out_dir / "correlation.csv" : fs::path(args.output);
    if (output.has_parent_path()) {
        ensure_dir(output.parent_path());
    }
    topo::text::write_file(output, topo::correlation_report_csv(rows));
    std::size_t undefined = 0;
    for (const auto& r : rows) {
        undefined += r.spearman ? 0 : 1;
    }
    emit("correlate", {{"metrics", std::to_string(rows.size())},
                       {"samples", std::to_string(accuracy.size())},
                       {"undefined", std::to_string(undefined)},
                       {"report", output.string()}});
    return kExitOk;
}

// ---------------------------------------------------------------- render

struct RenderArgs {
    std::string diagram;
    std::string mode = "barcode";
    std::string output;
};

int run_render(const RenderArgs& args, const fs::path& out_dir)
{
    const fs::path input = args.diagram;
    const auto dgm = topo::parse_diagram_csv(topo::text::read_file(input));
    const auto mode = args.mode == "diagram" ? topo::RenderMode::diagram : topo::RenderMode::barcode;
    const fs::path output = args.output.empty()
                                ? out_dir / (input.stem().string() + "." + args.mode + ".svg")
                                : fs::path(args.output);
    if (output.has_parent_path()) {
        ensure_dir(output.parent_path());
    }
    topo::text::write_file(output, topo::render_svg(dgm, mode));
    emit("render", {{"mode", args.mode}, {"pairs", std::to_string(dgm.pairs.size())},
                    {"svg", output.string()}});
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Persistent-homology analysis and topological-loss evolution of point clouds.\n"
                 "Exit codes: 0 success, 1 runtime/numeric failure, 2 input/parse failure.\n"
                 "Environment: " + std::string(kOutputDirEnv) +
                 " sets the default output directory (otherwise the current directory)."};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string out_dir_flag;
    auto add_out_dir = [&](CLI::App* sub) {
        sub->add_option("-o,--output-dir", out_dir_flag,
                        "Directory for outputs (default: $" + std::string(kOutputDirEnv) + " or .)");
    };
    const std::vector<std::string> formats = {"auto", "csv", "json"};

    AnalyzeArgs analyze;
    auto* cmd_analyze = app.add_subcommand("analyze", "Persistence diagram and topology summary of a snapshot");
    cmd_analyze->add_option("snapshot", analyze.snapshot, "Point cloud (.csv or .json)")->required();
    cmd_analyze->add_option("--format", analyze.format, "Snapshot format")->check(CLI::IsMember(formats));
    cmd_analyze->add_flag("--header", analyze.header, "CSV snapshot has a header row");
    cmd_analyze->add_option("--noise-floor", analyze.noise_floor,
                            "Count H1 pairs with lifespan > floor * diameter (0 <= floor < 1)");
    cmd_analyze->add_flag("--emit-loss", analyze.emit_loss, "Also write the TSLoss breakdown JSON");
    cmd_analyze->add_flag("--emit-gradient", analyze.emit_gradient,
                          "Include the n x d gradient in the loss JSON (implies --emit-loss)");
    cmd_analyze->add_option("--tau", analyze.tau, "Softmin temperature (default 0.1 x mean NN distance)");
    cmd_analyze->add_option("--alpha", analyze.alpha, "Soft-quantile sharpness (default 10 / mean distance)");
    add_out_dir(cmd_analyze);

    OptimizeArgs optimize;
    auto* cmd_optimize = app.add_subcommand("optimize", "Evolve a cloud under surrogate + lambda_ts * TSLoss");
    cmd_optimize->add_option("--init", optimize.init, "Initial snapshot");
    cmd_optimize->add_option("--init-gaussian", optimize.init_gaussian,
                             "Gaussian initial cloud: N D SIGMA SEED")
        ->expected(4);
    cmd_optimize->add_option("--format", optimize.format, "Format of --init/--anchor")->check(CLI::IsMember(formats));
    cmd_optimize->add_flag("--header", optimize.header, "CSV inputs have a header row");
    cmd_optimize->add_option("--steps", optimize.steps, "Optimizer iterations (default 300)");
    cmd_optimize->add_option("--snapshot-every", optimize.snapshot_every, "Record cadence (default 20)");
    cmd_optimize->add_option("--lr", optimize.lr, "Learning rate (default 1e-3)");
    cmd_optimize->add_option("--optimizer", optimize.optimizer, "adam or sgd (default adam)")
        ->check(CLI::IsMember({"adam", "sgd"}));
    cmd_optimize->add_flag("--backtracking", optimize.backtracking, "sgd: halve the step until the loss does not increase");
    cmd_optimize->add_option("--beta1", optimize.beta1, "adam beta1 (default 0.9)");
    cmd_optimize->add_option("--beta2", optimize.beta2, "adam beta2 (default 0.999)");
    cmd_optimize->add_option("--eps", optimize.eps, "adam epsilon (default 1e-8)");
    cmd_optimize->add_option("--lambda-ts", optimize.lambda_ts, "Overall TSLoss weight (default 1)");
    cmd_optimize->add_option("--tau", optimize.tau, "Softmin temperature (default 0.1 x initial mean NN distance)");
    cmd_optimize->add_option("--alpha", optimize.alpha, "Soft-quantile sharpness (default 10 / initial mean distance)");
    cmd_optimize->add_option("--beta-h0", optimize.beta_h0, "H0 term weight (default 1)");
    cmd_optimize->add_option("--beta-h1", optimize.beta_h1, "H1 term weight (default 1)");
    cmd_optimize->add_option("--lambda-repel", optimize.lambda_repel, "Repulsion weight (default 1)");
    cmd_optimize->add_option("--lambda-attract", optimize.lambda_attract, "Attraction weight (default 1)");
    cmd_optimize->add_option("--anchor", optimize.anchor, "Anchor surrogate target snapshot");
    cmd_optimize->add_option("--anchor-weight", optimize.anchor_weight, "Anchor surrogate weight (default 1)");
    cmd_optimize->add_option("--noise-floor", optimize.noise_floor, "Noise floor for recorded H1 counts");
    add_out_dir(cmd_optimize);

    TrajectoryArgs trajectory;
    auto* cmd_trajectory = app.add_subcommand("trajectory", "Recompute the metrics table from a stored run");
    cmd_trajectory->add_option("manifest", trajectory.manifest, "manifest.json written by optimize")->required();
    cmd_trajectory->add_option("--noise-floor", trajectory.noise_floor, "Noise floor for H1 counts");
    cmd_trajectory->add_option("--output", trajectory.output, "Metrics CSV (default <output-dir>/trajectory_metrics.csv)");
    cmd_trajectory->add_flag("--project-pca", trajectory.project_pca,
                             "Write a 2-column PCA projection per snapshot to <output-dir>/pca/");
    add_out_dir(cmd_trajectory);

    CorrelateArgs correlate;
    auto* cmd_correlate = app.add_subcommand(
        "correlate",
        "Spearman rho and Mann-Whitney U of each metric against an accuracy series.\n"
        "Rank-test groups split the rows at the accuracy median (<= median first); U is for the first group.");
    cmd_correlate->add_option("metrics", correlate.metrics, "Metrics CSV")->required();
    cmd_correlate->add_option("accuracy", correlate.accuracy, "Accuracy CSV, one value per row")->required();
    cmd_correlate->add_option("--output", correlate.output, "Report CSV (default <output-dir>/correlation.csv)");
    add_out_dir(cmd_correlate);

    RenderArgs render;
    auto* cmd_render = app.add_subcommand("render", "Render a diagram CSV as an SVG barcode or diagram");
    cmd_render->add_option("diagram", render.diagram, "Diagram CSV (dim,birth,death)")->required();
    cmd_render->add_option("--mode", render.mode, "barcode or diagram (default barcode)")
        ->check(CLI::IsMember({"barcode", "diagram"}));
    cmd_render->add_option("--output", render.output, "SVG path (default <output-dir>/<stem>.<mode>.svg)");
    add_out_dir(cmd_render);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    const fs::path out_dir = out_dir_flag.empty() ? default_output_dir() : fs::path(out_dir_flag);
    const char* name = app.get_subcommands().front()->get_name().c_str();
    try {
        if (*cmd_analyze) return run_analyze(analyze, out_dir);
        if (*cmd_optimize) return run_optimize(optimize, out_dir);
        if (*cmd_trajectory) return run_trajectory(trajectory, out_dir);
        if (*cmd_correlate) return run_correlate(correlate, out_dir);
        if (*cmd_render) return run_render(render, out_dir);
    } catch (const topo::InputError& e) {
        std::cerr << "topoprompt " << name << ": " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "topoprompt " << name << ": " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}
