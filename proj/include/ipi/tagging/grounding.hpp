// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Resolves free-text extractions (e.g. from a language model) to verifiable
// offsets in the source document. Each snippet goes through a tier cascade:
// exact substring, case-insensitive substring, then the best approximate
// window within an edit-distance budget. The first tier that matches wins and
// the earliest offset is taken. Snippets that resolve nowhere are rejected.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ipi/core/category.hpp"
#include "ipi/core/model.hpp"
#include "ipi/core/unicode.hpp"

namespace ipi {

enum class MatchTier { Exact, CaseInsensitive, Fuzzy };

constexpr std::string_view to_string(MatchTier t) noexcept
{
    switch (t) {
    case MatchTier::Exact: return "exact";
    case MatchTier::CaseInsensitive: return "case-insensitive";
    case MatchTier::Fuzzy: return "fuzzy";
    }
    return "?";
}

struct Extraction {
    Category category = Category::Other;
    std::string snippet;
};

struct GroundedSpan {
    SpanAnnotation span;
    std::string requested; // the snippet as extracted
    MatchTier tier = MatchTier::Exact;
    std::size_t edit_distance = 0;
    std::vector<std::size_t> other_offsets; // further occurrences at the same tier

    bool ambiguous() const noexcept { return !other_offsets.empty(); }
};

struct RejectedSnippet {
    Category category = Category::Other;
    std::string snippet;
    std::string reason;
};

struct GroundingReport {
    std::string doc_id;
    std::vector<GroundedSpan> grounded;
    std::vector<RejectedSnippet> rejected;

    std::size_t total() const noexcept { return grounded.size() + rejected.size(); }

    double hallucination_rate() const noexcept
    {
        return total() ? static_cast<double>(rejected.size()) / static_cast<double>(total()) : 0.0;
    }

    GroundingReport& operator+=(const GroundingReport& o)
    {
        grounded.insert(grounded.end(), o.grounded.begin(), o.grounded.end());
        rejected.insert(rejected.end(), o.rejected.begin(), o.rejected.end());
        return *this;
    }
};

/// Default fuzzy budget: 2 edits per 20 snippet characters, rounded down.
constexpr std::size_t proportional_edit_budget(std::size_t snippet_length) noexcept
{
    return snippet_length * 2 / 20;
}

inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b)
{
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

/// Start offsets of every (possibly overlapping) occurrence of `needle`.
inline std::vector<std::size_t> find_all(std::u32string_view haystack, std::u32string_view needle)
{
    std::vector<std::size_t> out;
    if (needle.empty())
        return out;
    for (auto pos = haystack.find(needle); pos != std::u32string_view::npos; pos = haystack.find(needle, pos + 1))
        out.push_back(pos);
    return out;
}

struct FuzzyWindow {
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t distance = 0;
};

/// Best approximate occurrence of `pattern` in `text` (semi-global edit
/// distance): lowest distance, then earliest start, then earliest end.
/// nullopt when nothing is within `max_distance` or the best window is empty.
inline std::optional<FuzzyWindow> best_fuzzy_window(std::u32string_view text, std::u32string_view pattern,
                                                    std::size_t max_distance)
{
    if (pattern.empty() || text.empty())
        return std::nullopt;
    struct Cell {
        std::size_t cost;
        std::size_t start;
        bool operator<(const Cell& o) const noexcept { return cost != o.cost ? cost < o.cost : start < o.start; }
    };
    const std::size_t m = pattern.size();
    // column over pattern prefix lengths for the current text position
    std::vector<Cell> prev(m + 1), cur(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
        prev[i] = Cell{i, 0};

    std::optional<FuzzyWindow> best;
    for (std::size_t j = 1; j <= text.size(); ++j) {
        cur[0] = Cell{0, j}; // a window may start at any position
        for (std::size_t i = 1; i <= m; ++i) {
            Cell sub{prev[i - 1].cost + (pattern[i - 1] == text[j - 1] ? 0 : 1), prev[i - 1].start};
            Cell del{cur[i - 1].cost + 1, cur[i - 1].start}; // pattern char skipped
            Cell ins{prev[i].cost + 1, prev[i].start};       // text char extra
            cur[i] = std::min({sub, del, ins});
        }
        const Cell& c = cur[m];
        if (c.cost <= max_distance && c.start < j) {
            FuzzyWindow w{c.start, j, c.cost};
            if (!best || std::tie(w.distance, w.start, w.end) < std::tie(best->distance, best->start, best->end))
                best = w;
        }
        std::swap(prev, cur);
    }
    return best;
}

/// Grounds each extraction in `doc`. `max_edit_distance` overrides the
/// proportional default budget; 0 disables the fuzzy tier.
inline GroundingReport ground_extractions(const Document& doc, std::span<const Extraction> extractions,
                                          std::optional<std::size_t> max_edit_distance = std::nullopt,
                                          const std::string& source = "grounded")
{
    GroundingReport report;
    report.doc_id = doc.doc_id();
    const std::u32string_view text(doc.text());
    const std::u32string lowered = unicode::to_lower(text);

    for (const auto& ex : extractions) {
        std::u32string needle;
        try {
            needle = unicode::decode_utf8(ex.snippet);
        } catch (const DataError&) {
            report.rejected.push_back({ex.category, ex.snippet, "invalid UTF-8"});
            continue;
        }
        if (needle.empty()) {
            report.rejected.push_back({ex.category, ex.snippet, "empty snippet"});
            continue;
        }

        auto accept = [&](std::size_t start, std::size_t end, MatchTier tier, std::size_t distance,
                          std::vector<std::size_t> others) {
            GroundedSpan g;
            g.span = make_span(doc, start, end, ex.category, source);
            g.requested = ex.snippet;
            g.tier = tier;
            g.edit_distance = distance;
            g.other_offsets = std::move(others);
            report.grounded.push_back(std::move(g));
        };

        if (auto hits = find_all(text, needle); !hits.empty()) {
            accept(hits.front(), hits.front() + needle.size(), MatchTier::Exact, 0,
                   std::vector<std::size_t>(hits.begin() + 1, hits.end()));
            continue;
        }
        const auto lowered_needle = unicode::to_lower(needle);
        if (auto hits = find_all(lowered, lowered_needle); !hits.empty()) {
            accept(hits.front(), hits.front() + needle.size(), MatchTier::CaseInsensitive, 0,
                   std::vector<std::size_t>(hits.begin() + 1, hits.end()));
            continue;
        }
        const std::size_t budget = max_edit_distance.value_or(proportional_edit_budget(needle.size()));
        if (budget > 0) {
            if (auto w = best_fuzzy_window(lowered, lowered_needle, std::min(budget, needle.size() - 1))) {
                accept(w->start, w->end, MatchTier::Fuzzy, w->distance, {});
                continue;
            }
        }
        report.rejected.push_back({ex.category, ex.snippet, "not found"});
    }
    return report;
}

/// Re-checks a grounded span against the document under its tier's rule.
inline bool satisfies_tier(const Document& doc, const GroundedSpan& g)
{
    if (g.span.end > doc.size() || g.span.start >= g.span.end || g.span.snippet != doc.slice(g.span.start, g.span.end))
        return false;
    const auto requested = unicode::decode_utf8(g.requested);
    const auto actual = doc.view(g.span.start, g.span.end);
    switch (g.tier) {
    case MatchTier::Exact: return actual == requested;
    case MatchTier::CaseInsensitive: return unicode::to_lower(actual) == unicode::to_lower(requested);
    case MatchTier::Fuzzy:
        return levenshtein(unicode::to_lower(actual), unicode::to_lower(requested)) == g.edit_distance;
    }
    return false;
}

} // namespace ipi
