#include "topo/export.hpp"

#include "topo/errors.hpp"
#include "topo/text.hpp"

#include <algorithm>

namespace topo {

std::string diagram_csv(const PersistenceDiagram& diagram)
{
    std::string out = "dim,birth,death\n";
    for (const auto& p : diagram.pairs) {
        out += std::to_string(p.dim) + "," + text::format_real(p.birth) + "," +
               text::format_real(p.death) + "\n";
    }
    return out;
}

PersistenceDiagram parse_diagram_csv(const std::string& body)
{
    const auto all = text::lines(body);
    if (all.empty() || all.front() != "dim,birth,death") {
        throw FormatError("diagram CSV must start with the header 'dim,birth,death'");
    }
    PersistenceDiagram out;
    for (std::size_t li = 1; li < all.size(); ++li) {
        if (all[li].empty()) continue;
        const auto fields = text::split(all[li], ',');
        if (fields.size() != 3) {
            throw FormatError("row " + std::to_string(li + 1) + ": expected 3 columns");
        }
        const auto dim = text::parse_real(fields[0]);
        const auto birth = text::parse_real(fields[1]);
        const auto death = text::parse_real(fields[2], true);
        if (!dim || (*dim != 0.0 && *dim != 1.0)) {
            throw ParseError("row " + std::to_string(li + 1) + ", column 1: dim must be 0 or 1");
        }
        if (!birth) {
            throw ParseError("row " + std::to_string(li + 1) + ", column 2: bad birth value");
        }
        if (!death || *death < *birth) {
            throw ParseError("row " + std::to_string(li + 1) + ", column 3: bad death value");
        }
        out.pairs.push_back({static_cast<int>(*dim), *birth, *death});
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

nlohmann::ordered_json summary_json(const TopologySummary& s, std::optional<std::size_t> step)
{
    nlohmann::ordered_json j;
    if (step) {
        j["step"] = *step;
    }
    j["h0_count"] = s.h0_count;
    j["h1_count"] = s.h1_count;
    j["avg_life_h0"] = s.avg_life_h0;
    j["avg_life_h1"] = s.avg_life_h1;
    j["max_life"] = s.max_life;
    j["persistence_entropy"] = s.persistence_entropy;
    j["entropy_h0"] = s.entropy_h0 ? nlohmann::ordered_json(*s.entropy_h0) : nullptr;
    j["entropy_h1"] = s.entropy_h1 ? nlohmann::ordered_json(*s.entropy_h1) : nullptr;
    j["h1_density"] = s.h1_density;
    j["nn_density"] = s.nn_density;
    return j;
}

nlohmann::ordered_json loss_json(const LossBreakdown& b, const LossConfig& config,
                                 bool include_gradient)
{
    nlohmann::ordered_json j;
    j["tau"] = b.tau;
    j["alpha"] = b.alpha;
    j["lambda_ts"] = config.lambda_ts;
    j["beta_h0"] = config.beta_h0;
    j["beta_h1"] = config.beta_h1;
    j["lambda_repel"] = config.lambda_repel;
    j["lambda_attract"] = config.lambda_attract;
    j["s"] = b.s;
    j["s_bar"] = b.s_bar;
    j["delta"] = b.delta;
    j["zeta"] = b.zeta;
    j["l_h0"] = b.l_h0;
    j["l_h1"] = b.l_h1;
    j["l_ts"] = b.l_ts;
    if (include_gradient) {
        auto rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < b.gradient.rows(); ++i) {
            const auto r = b.gradient.row(i);
            rows.push_back(std::vector<double>(r.begin(), r.end()));
        }
        j["gradient"] = std::move(rows);
    }
    return j;
}

std::string manifest_json(const std::vector<ManifestEntry>& entries)
{
    auto doc = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json j;
        j["step"] = e.step;
        j["snapshot_path"] = e.snapshot_path;
        j["ts_loss"] = e.ts_loss;
        j["total_loss"] = e.total_loss;
        doc.push_back(std::move(j));
    }
    return dump(doc);
}

std::vector<ManifestEntry> parse_manifest(const std::string& body)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid manifest JSON: ") + e.what());
    }
    if (!doc.is_array()) {
        throw FormatError("manifest must be a JSON array");
    }
    std::vector<ManifestEntry> out;
    for (const auto& j : doc) {
        try {
            out.push_back({j.at("step").get<std::size_t>(), j.at("snapshot_path").get<std::string>(),
                           j.at("ts_loss").get<double>(), j.at("total_loss").get<double>()});
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("malformed manifest entry: ") + e.what());
        }
    }
    return out;
}

std::string dump(const nlohmann::ordered_json& doc)
{
    return doc.dump(2) + "\n";
}

} // namespace topo
