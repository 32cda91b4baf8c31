#pragma once

#include "topo/evolve.hpp"
#include "topo/homology.hpp"
#include "topo/metrics.hpp"
#include "topo/tsloss.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace topo {

/// `dim,birth,death` with one pair per row and `inf` for the essential death.
std::string diagram_csv(const PersistenceDiagram& diagram);

/// Inverse of diagram_csv. point_count/diameter are not recoverable and are
/// left as 0.
PersistenceDiagram parse_diagram_csv(const std::string& body);

nlohmann::ordered_json summary_json(const TopologySummary& summary,
                                    std::optional<std::size_t> step = std::nullopt);

nlohmann::ordered_json loss_json(const LossBreakdown& breakdown, const LossConfig& config,
                                 bool include_gradient);

struct ManifestEntry {
    std::size_t step = 0;
    std::string snapshot_path; // relative to the manifest's directory
    double ts_loss = 0.0;
    double total_loss = 0.0;
};

std::string manifest_json(const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> parse_manifest(const std::string& body);

/// Dumps JSON with two-space indentation and a trailing newline.
std::string dump(const nlohmann::ordered_json& doc);

} // namespace topo
