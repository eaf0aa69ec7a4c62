// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"

#include "ipi/evaluation/evaluation.hpp"

namespace ipi {

inline nlohmann::ordered_json to_json(const Scores& s)
{
    return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

inline nlohmann::ordered_json to_json(const EvalReport& r)
{
    nlohmann::ordered_json out;
    out["schema"] = std::string(to_string(r.schema));
    out["overlap"] = r.mode == OverlapMode::Token ? "token" : "character";
    auto rows = nlohmann::ordered_json::array();
    for (Category c : kAllCategories) {
        const auto& ce = r.per_category[index_of(c)];
        nlohmann::ordered_json row;
        row["category"] = std::string(to_string(c));
        row["precision"] = ce.scores.precision;
        row["recall"] = ce.scores.recall;
        row["f1"] = ce.scores.f1;
        row["support"] = ce.support();
        row["gold"] = {{"correct", ce.gold.correct},
                       {"incorrect", ce.gold.incorrect},
                       {"partial", ce.gold.partial},
                       {"missed", ce.gold.missed}};
        row["predicted"] = {{"correct", ce.pred.correct},
                            {"incorrect", ce.pred.incorrect},
                            {"partial", ce.pred.partial},
                            {"spurious", ce.pred.spurious}};
        rows.push_back(std::move(row));
    }
    out["categories"] = std::move(rows);
    out["micro"] = to_json(r.micro);
    out["macro"] = to_json(r.macro);
    out["support"] = r.support();
    out["predictions"] = r.pred_total.total();
    return out;
}

/// Aligned P/R/F1/Support table with micro and macro footer rows.
inline void write_table(std::ostream& os, const EvalReport& r)
{
    char buf[160];
    auto row = [&](const std::string& name, const Scores& s, std::size_t support) {
        std::snprintf(buf, sizeof buf, "%-15s %6.2f %6.2f %6.2f %8zu\n", name.c_str(), s.precision, s.recall, s.f1,
                      support);
        os << buf;
    };
    std::snprintf(buf, sizeof buf, "%-15s %6s %6s %6s %8s\n", "Category", "P", "R", "F1", "Support");
    os << buf;
    for (Category c : kAllCategories) {
        const auto& ce = r.per_category[index_of(c)];
        row(std::string(to_string(c)), ce.scores, ce.support());
    }
    os << std::string(45, '-') << '\n';
    row("micro average", r.micro, r.support());
    row("macro average", r.macro, r.support());
}

} // namespace ipi
