// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Extraction input is JSONL, one record per (document, label):
//   {"doc_id": "...", "label": "FAMILY", "snippets": ["...", ...]}

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "ipi/corpus/jsonl.hpp"
#include "ipi/tagging/grounding.hpp"

namespace ipi {

using ExtractionsByDoc = std::map<std::string, std::vector<Extraction>>;

inline ExtractionsByDoc read_extractions(std::istream& in, const std::string& name = "<extractions>")
{
    ExtractionsByDoc out;
    detail::for_each_json_line(in, name, [&](const nlohmann::json& obj, std::size_t) {
        const auto doc_id = detail::require_string(obj, "doc_id");
        const auto category = parse_category(detail::require_string(obj, "label"));
        const auto& snippets = detail::require(obj, "snippets");
        if (!snippets.is_array())
            throw DataError("field \"snippets\" must be an array of strings");
        auto& list = out[doc_id];
        for (const auto& s : snippets) {
            if (!s.is_string())
                throw DataError("field \"snippets\" must be an array of strings");
            list.push_back(Extraction{category, s.get<std::string>()});
        }
    });
    return out;
}

inline ExtractionsByDoc read_extractions(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    return read_extractions(in, path.string());
}

inline nlohmann::ordered_json to_json(const GroundingReport& r)
{
    nlohmann::ordered_json out;
    if (!r.doc_id.empty())
        out["doc_id"] = r.doc_id;
    auto grounded = nlohmann::ordered_json::array();
    for (const auto& g : r.grounded) {
        nlohmann::ordered_json row = ipi::to_json(g.span);
        row["requested"] = g.requested;
        row["tier"] = std::string(to_string(g.tier));
        row["edit_distance"] = g.edit_distance;
        row["ambiguous"] = g.ambiguous();
        if (g.ambiguous())
            row["other_offsets"] = g.other_offsets;
        grounded.push_back(std::move(row));
    }
    auto rejected = nlohmann::ordered_json::array();
    for (const auto& x : r.rejected)
        rejected.push_back({{"label", std::string(to_string(x.category))}, {"snippet", x.snippet}, {"reason", x.reason}});
    out["grounded"] = std::move(grounded);
    out["rejected"] = std::move(rejected);
    out["total"] = r.total();
    out["hallucination_rate"] = r.hallucination_rate();
    return out;
}

} // namespace ipi
