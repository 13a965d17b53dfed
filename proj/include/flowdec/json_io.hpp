#pragma once

// JSON witness documents: the machine-readable result format emitted by the
// CLI and accepted back by its verify command. Schema version 1:
//
// {
//   "schema": 1,
//   "results": [ {
//       "instance": "<name>", "variant": "pc|trail-cg|trail-reach|walk",
//       "mode": "min-k|fixed-k|generated", "status": "<outcome>",
//       "k_star": <int, when known>,
//       "elements": [ {"kind": "...", "nodes": [ints], "weight": int} ],
//       "probes": [ {"k", "verdict", "seconds", "cg_rounds",
//                    "components_added"} ],
//       "total_seconds": <float>, "detail": "<string, on errors>"
//   } ]
// }
//
// Node sequences are the witness format; solver variables never appear.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "decomposition.hpp"
#include "search.hpp"

namespace flowdec {

inline constexpr int witness_schema_version = 1;

struct witness_record {
    std::string instance;
    std::string mode = "min-k";
    std::string status;
    int k_star = -1;
    decomposition dec;  // variant carries the problem; elements may be empty
    std::vector<probe_record> probes;
    double total_seconds = 0;
    std::string detail;
};

inline nlohmann::json element_to_json(const decomposition_element& el) {
    return {{"kind", element_kind_name(el.kind)},
            {"nodes", el.node_sequence},
            {"weight", el.weight}};
}

inline nlohmann::json record_to_json(const witness_record& rec) {
    nlohmann::json j;
    j["instance"] = rec.instance;
    j["variant"] = variant_name(rec.dec.variant.problem);
    j["mode"] = rec.mode;
    j["status"] = rec.status;
    if (rec.k_star >= 0) j["k_star"] = rec.k_star;
    auto& els = j["elements"] = nlohmann::json::array();
    for (const auto& el : rec.dec.elements) els.push_back(element_to_json(el));
    if (!rec.probes.empty()) {
        auto& probes = j["probes"] = nlohmann::json::array();
        for (const auto& p : rec.probes)
            probes.push_back({{"k", p.k},
                              {"verdict", probe_verdict_name(p.verdict)},
                              {"seconds", p.seconds},
                              {"cg_rounds", p.cg_rounds},
                              {"components_added", p.components_added}});
    }
    j["total_seconds"] = rec.total_seconds;
    if (!rec.detail.empty()) j["detail"] = rec.detail;
    return j;
}

inline nlohmann::json witness_document(const std::vector<witness_record>& recs) {
    nlohmann::json doc;
    doc["schema"] = witness_schema_version;
    auto& results = doc["results"] = nlohmann::json::array();
    for (const auto& r : recs) results.push_back(record_to_json(r));
    return doc;
}

// Strict reader: any missing field, unknown name, or type mismatch yields
// nullopt so the caller can treat the document as malformed.
inline std::optional<std::vector<witness_record>> read_witness_document(
    const std::string& text) {
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    if (doc.value("schema", -1) != witness_schema_version) return std::nullopt;
    if (!doc.contains("results") || !doc["results"].is_array())
        return std::nullopt;

    std::vector<witness_record> out;
    for (const auto& j : doc["results"]) {
        if (!j.is_object()) return std::nullopt;
        witness_record rec;
        if (!j.contains("instance") || !j["instance"].is_string())
            return std::nullopt;
        rec.instance = j["instance"].get<std::string>();
        if (!j.contains("variant") || !j["variant"].is_string())
            return std::nullopt;
        if (!variant_from_name(j["variant"].get<std::string>(),
                               rec.dec.variant.problem))
            return std::nullopt;
        rec.mode = j.value("mode", "min-k");
        rec.status = j.value("status", "");
        rec.k_star = j.value("k_star", -1);
        rec.total_seconds = j.value("total_seconds", 0.0);
        rec.detail = j.value("detail", "");
        if (j.contains("elements")) {
            if (!j["elements"].is_array()) return std::nullopt;
            for (const auto& e : j["elements"]) {
                if (!e.is_object() || !e.contains("kind") ||
                    !e["kind"].is_string() || !e.contains("nodes") ||
                    !e["nodes"].is_array() || !e.contains("weight") ||
                    !e["weight"].is_number_integer())
                    return std::nullopt;
                decomposition_element el;
                if (!element_kind_from_name(e["kind"].get<std::string>(),
                                            el.kind))
                    return std::nullopt;
                for (const auto& v : e["nodes"]) {
                    if (!v.is_number_integer()) return std::nullopt;
                    el.node_sequence.push_back(v.get<int>());
                }
                el.weight = e["weight"].get<long long>();
                rec.dec.elements.push_back(std::move(el));
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace flowdec
