// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"

#include "ipi/agreement/agreement.hpp"

namespace ipi {

inline nlohmann::ordered_json to_json(const AgreementReport& r)
{
    nlohmann::ordered_json out;
    out["mode"] = r.mode == OverlapMode::Token ? "token" : "character";
    out["source_a"] = r.source_a;
    out["source_b"] = r.source_b;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& [cat, ca] : r.per_category) {
        nlohmann::ordered_json row;
        row["category"] = std::string(to_string(cat));
        row["f1"] = ca.f1;
        row["f1_a_as_gold"] = ca.f1_a_gold;
        row["f1_b_as_gold"] = ca.f1_b_gold;
        row["a_total"] = ca.counts.a_total;
        row["a_matched"] = ca.counts.a_matched;
        row["b_total"] = ca.counts.b_total;
        row["b_matched"] = ca.counts.b_matched;
        rows.push_back(std::move(row));
    }
    out["categories"] = std::move(rows);
    out["micro_f1"] = r.micro_f1;
    out["macro_f1"] = r.macro_f1;
    out["a_total"] = r.pooled.a_total;
    out["a_matched"] = r.pooled.a_matched;
    out["b_total"] = r.pooled.b_total;
    out["b_matched"] = r.pooled.b_matched;
    return out;
}

/// Two-column table: category rows, then micro and macro averages.
inline void write_table(std::ostream& os, const AgreementReport& r)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-15s %8s\n", "Category", "F1");
    os << buf;
    for (const auto& [cat, ca] : r.per_category) {
        std::snprintf(buf, sizeof buf, "%-15s %8.2f\n", std::string(to_string(cat)).c_str(), ca.f1);
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "%-15s %8.2f\n%-15s %8.2f\n", "micro average", r.micro_f1, "macro average",
                  r.macro_f1);
    os << buf;
}

} // namespace ipi
