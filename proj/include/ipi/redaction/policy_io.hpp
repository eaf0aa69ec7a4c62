// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Policy files are JSON:
//   {"default": "PLACEHOLDER", "actions": {"RELTIME": "KEEP", "SEC": "SUPPRESS"}, "counters": false}

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "ipi/redaction/redaction.hpp"

namespace ipi {

inline RedactionPolicy policy_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw DataError("redaction policy must be a JSON object");
    try {
        RedactionPolicy policy(parse_action(j.value("default", std::string("PLACEHOLDER"))));
        if (auto it = j.find("actions"); it != j.end()) {
            if (!it->is_object())
                throw DataError("\"actions\" must map category names to actions");
            for (const auto& [cat, action] : it->items())
                policy.set(parse_category(cat), parse_action(action.get<std::string>()));
        }
        policy.with_counters(j.value("counters", false));
        return policy;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid redaction policy: ") + e.what());
    }
}

inline RedactionPolicy load_policy(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError(path.string() + ": cannot open policy file");
    try {
        return policy_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

inline nlohmann::ordered_json to_json(const RedactionPolicy& p)
{
    nlohmann::ordered_json actions;
    for (Category c : kAllCategories)
        actions[std::string(to_string(c))] = std::string(to_string(p.action(c)));
    return {{"actions", actions}, {"counters", p.counters()}, {"fingerprint", p.fingerprint()}};
}

/// Audit record for one document: the offset map and per-category counts.
inline nlohmann::ordered_json audit_json(const RedactionResult& r, const VerificationResult& v)
{
    nlohmann::ordered_json out;
    out["doc_id"] = r.doc_id;
    out["policy_fingerprint"] = r.policy_fingerprint;
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (Category c : kAllCategories)
        if (r.replacements[index_of(c)])
            counts[std::string(to_string(c))] = r.replacements[index_of(c)];
    out["replacements"] = std::move(counts);
    auto map = nlohmann::ordered_json::array();
    for (const auto& m : r.offset_map) {
        nlohmann::ordered_json e;
        e["original"] = {m.orig_start, m.orig_end};
        if (m.removed)
            e["output"] = "REMOVED";
        else
            e["output"] = {m.out_start, m.out_end};
        if (m.category)
            e["label"] = std::string(to_string(*m.category));
        map.push_back(std::move(e));
    }
    out["offset_map"] = std::move(map);
    out["verified"] = v.ok;
    auto violations = nlohmann::ordered_json::array();
    for (const auto& x : v.violations)
        violations.push_back({{"start", x.start}, {"end", x.end}, {"snippet", x.snippet}, {"reason", x.reason}});
    out["violations"] = std::move(violations);
    return out;
}

} // namespace ipi
