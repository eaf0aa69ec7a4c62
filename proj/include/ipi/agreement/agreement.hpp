// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Inter-annotator agreement as pairwise relaxed F1. A span counts as matched
// when any span of the same label on the other side overlaps it (by token by
// default, or by character); there is no one-to-one assignment.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ipi/core/annotation_set.hpp"
#include "ipi/core/span_ops.hpp"
#include "ipi/corpus/tokenizer.hpp"

namespace ipi {

struct MatchCount {
    std::size_t matched_gold = 0;
    std::size_t matched_response = 0;

    friend bool operator==(const MatchCount&, const MatchCount&) = default;
};

inline MatchCount relaxed_match_count(std::span<const SpanAnnotation> gold, std::span<const SpanAnnotation> response,
                                      const OverlapTest& overlap)
{
    // identical bounds always match, as in evaluation; in token mode a span
    // covering only whitespace shares no token, even with itself
    auto matches = [&](const SpanAnnotation& x, std::span<const SpanAnnotation> others) {
        return std::any_of(others.begin(), others.end(), [&](const SpanAnnotation& y) {
            return x.category == y.category && ((x.start == y.start && x.end == y.end) || overlap(x, y));
        });
    };
    MatchCount out;
    for (const auto& g : gold)
        out.matched_gold += matches(g, response) ? 1 : 0;
    for (const auto& r : response)
        out.matched_response += matches(r, gold) ? 1 : 0;
    return out;
}

/// Token-overlap form.
inline MatchCount relaxed_match_count(std::span<const SpanAnnotation> gold, std::span<const SpanAnnotation> response,
                                      std::span<const Token> tokens)
{
    return relaxed_match_count(gold, response, OverlapTest(tokens));
}

/// Directed counts with `a` as reference and `b` as response.
struct DirectedCounts {
    std::size_t a_total = 0;
    std::size_t b_total = 0;
    std::size_t a_matched = 0; // a spans with a same-label overlapping b span
    std::size_t b_matched = 0;

    DirectedCounts& operator+=(const DirectedCounts& o)
    {
        a_total += o.a_total;
        b_total += o.b_total;
        a_matched += o.a_matched;
        b_matched += o.b_matched;
        return *this;
    }
};

inline double f1_from_pr(double p, double r)
{
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

/// F1 with a as gold (recall over a) and b as response (precision over b).
inline double directed_f1(std::size_t gold_total, std::size_t gold_matched, std::size_t resp_total,
                          std::size_t resp_matched)
{
    const double r = gold_total ? static_cast<double>(gold_matched) / static_cast<double>(gold_total) : 0.0;
    const double p = resp_total ? static_cast<double>(resp_matched) / static_cast<double>(resp_total) : 0.0;
    return f1_from_pr(p, r);
}

struct CategoryAgreement {
    DirectedCounts counts;
    double f1_a_gold = 0.0; // a as gold, b as response
    double f1_b_gold = 0.0; // b as gold, a as response
    double f1 = 0.0;        // mean of the two directions
};

struct AgreementReport {
    OverlapMode mode = OverlapMode::Token;
    std::string source_a;
    std::string source_b;
    // categories present in either set
    std::map<Category, CategoryAgreement> per_category;
    DirectedCounts pooled;
    double micro_f1 = 0.0;
    double macro_f1 = 0.0;
};

inline double averaged_f1(const DirectedCounts& c)
{
    const double ab = directed_f1(c.a_total, c.a_matched, c.b_total, c.b_matched);
    const double ba = directed_f1(c.b_total, c.b_matched, c.a_total, c.a_matched);
    return (ab + ba) / 2.0;
}

/// Pairwise relaxed F1 between two annotation sets over a corpus: each
/// category and the pooled (micro) counts are scored in both directions and
/// the two F1 values averaged. Macro is the unweighted mean over categories
/// present in either set.
inline AgreementReport pairwise_relaxed_f1(const AnnotationSet& a, const AnnotationSet& b, const Corpus& corpus,
                                           OverlapMode mode = OverlapMode::Token)
{
    std::set<std::string> doc_ids;
    for (const auto* set : {&a, &b}) {
        for (const auto& [id, spans] : set->documents()) {
            if (!corpus.contains(id))
                throw DataError("annotation set '" + set->source() + "' references document '" + id +
                                "' missing from the corpus");
            if (!spans.empty())
                doc_ids.insert(id);
        }
    }

    AgreementReport report;
    report.mode = mode;
    report.source_a = a.source();
    report.source_b = b.source();

    CategoryTable<DirectedCounts> per_cat{};
    for (const auto& id : doc_ids) {
        const auto& doc = corpus.at(id);
        std::vector<Token> tokens;
        if (mode == OverlapMode::Token)
            tokens = tokenize(doc);
        const OverlapTest overlap = mode == OverlapMode::Token ? OverlapTest(tokens) : OverlapTest();

        for (Category c : kAllCategories) {
            std::vector<SpanAnnotation> sa, sb;
            for (const auto& s : a.spans(id))
                if (s.category == c)
                    sa.push_back(s);
            for (const auto& s : b.spans(id))
                if (s.category == c)
                    sb.push_back(s);
            if (sa.empty() && sb.empty())
                continue;
            const auto m = relaxed_match_count(sa, sb, overlap);
            per_cat[index_of(c)] += DirectedCounts{sa.size(), sb.size(), m.matched_gold, m.matched_response};
        }
    }

    double macro_sum = 0.0;
    for (Category c : kAllCategories) {
        const auto& counts = per_cat[index_of(c)];
        report.pooled += counts;
        if (counts.a_total + counts.b_total == 0)
            continue;
        CategoryAgreement ca;
        ca.counts = counts;
        ca.f1_a_gold = directed_f1(counts.a_total, counts.a_matched, counts.b_total, counts.b_matched);
        ca.f1_b_gold = directed_f1(counts.b_total, counts.b_matched, counts.a_total, counts.a_matched);
        ca.f1 = (ca.f1_a_gold + ca.f1_b_gold) / 2.0;
        macro_sum += ca.f1;
        report.per_category.emplace(c, ca);
    }
    report.micro_f1 = averaged_f1(report.pooled);
    report.macro_f1 = report.per_category.empty() ? 0.0 : macro_sum / static_cast<double>(report.per_category.size());
    return report;
}

} // namespace ipi
