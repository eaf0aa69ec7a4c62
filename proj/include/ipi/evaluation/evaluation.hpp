// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Span-level scoring under four matching schemas
// (strict, exact, partial, type).
//
// Outcomes attach to both sides of a pairing. Because a pairing can cross
// categories (an `incorrect` type match, an `exact` boundary match), each
// category keeps gold-side counts (correct/incorrect/partial/missed, summing
// to its support) and prediction-side counts (correct/incorrect/partial/
// spurious, summing to its prediction count). Recall reads the gold side,
// precision the prediction side.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ipi/agreement/agreement.hpp"
#include "ipi/core/annotation_set.hpp"
#include "ipi/core/span_ops.hpp"
#include "ipi/corpus/tokenizer.hpp"

namespace ipi {

enum class Schema { Strict, Exact, Partial, Type };

inline constexpr Schema kAllSchemas[] = {Schema::Strict, Schema::Exact, Schema::Partial, Schema::Type};

constexpr std::string_view to_string(Schema s) noexcept
{
    switch (s) {
    case Schema::Strict: return "strict";
    case Schema::Exact: return "exact";
    case Schema::Partial: return "partial";
    case Schema::Type: return "type";
    }
    return "?";
}

inline Schema parse_schema(std::string_view s)
{
    for (Schema x : kAllSchemas)
        if (to_string(x) == s)
            return x;
    throw UsageError("unknown evaluation schema '" + std::string(s) + "' (expected strict, exact, partial or type)");
}

enum class Outcome { Correct, Incorrect, Partial, Missed, Spurious };

constexpr std::string_view to_string(Outcome o) noexcept
{
    switch (o) {
    case Outcome::Correct: return "correct";
    case Outcome::Incorrect: return "incorrect";
    case Outcome::Partial: return "partial";
    case Outcome::Missed: return "missed";
    case Outcome::Spurious: return "spurious";
    }
    return "?";
}

/// Outcome of pairing `gold` with `pred`; nullopt when they do not overlap
/// and therefore cannot be paired at all.
inline std::optional<Outcome> classify_pair(const SpanAnnotation& gold, const SpanAnnotation& pred, Schema schema,
                                            const OverlapTest& overlap = {})
{
    if (gold.doc_id != pred.doc_id)
        throw UsageError("classify_pair: spans belong to different documents");
    const bool same_bounds = gold.start == pred.start && gold.end == pred.end;
    if (!same_bounds && !overlap(gold, pred))
        return std::nullopt;
    const bool same_label = gold.category == pred.category;
    switch (schema) {
    case Schema::Strict: return same_bounds && same_label ? Outcome::Correct : Outcome::Incorrect;
    case Schema::Exact: return same_bounds ? Outcome::Correct : Outcome::Incorrect;
    case Schema::Partial: return same_bounds ? Outcome::Correct : Outcome::Partial;
    case Schema::Type: return same_label ? Outcome::Correct : Outcome::Incorrect;
    }
    return std::nullopt;
}

struct Pairing {
    std::optional<std::size_t> gold; // index into the gold list
    std::optional<std::size_t> pred; // index into the prediction list
    Outcome outcome;
};

/// One-to-one alignment of a document's gold and predicted spans.
///
/// Pass 1 pairs every gold span with an unclaimed prediction it scores
/// `correct` against; pass 2 pairs the remaining gold spans with remaining
/// overlapping predictions (incorrect or partial). Within a pass gold spans
/// are visited in order of their overlap interval end (document order for the
/// disjoint same-category spans of a normalized set) and each takes the
/// candidate whose interval ends first. On interval overlap graphs that rule
/// yields a maximum matching, so the correct count is the best any one-to-one
/// alignment can reach. Leftover gold is missed, leftover predictions spurious.
inline std::vector<Pairing> align(std::span<const SpanAnnotation> gold, std::span<const SpanAnnotation> pred,
                                  Schema schema, const OverlapTest& overlap = {})
{
    using Key = std::pair<std::size_t, std::size_t>;
    auto key_of = [&](const SpanAnnotation& s) -> Key {
        // spans touching no token can still pair on identical boundaries; give
        // them an empty interval so they sort deterministically
        auto k = overlap.key(s);
        return k ? *k : Key{s.start, s.start};
    };
    std::vector<Key> gold_key(gold.size()), pred_key(pred.size());
    for (std::size_t i = 0; i < gold.size(); ++i)
        gold_key[i] = key_of(gold[i]);
    for (std::size_t j = 0; j < pred.size(); ++j)
        pred_key[j] = key_of(pred[j]);

    std::vector<std::size_t> gold_order(gold.size());
    for (std::size_t i = 0; i < gold.size(); ++i)
        gold_order[i] = i;
    std::stable_sort(gold_order.begin(), gold_order.end(), [&](std::size_t x, std::size_t y) {
        return std::tie(gold_key[x].second, gold_key[x].first, gold[x].category) <
               std::tie(gold_key[y].second, gold_key[y].first, gold[y].category);
    });

    std::vector<bool> gold_done(gold.size(), false), pred_taken(pred.size(), false);
    std::vector<Pairing> out;

    auto pass = [&](bool want_correct) {
        for (std::size_t gi : gold_order) {
            if (gold_done[gi])
                continue;
            std::optional<std::size_t> best;
            Outcome best_outcome = Outcome::Correct;
            for (std::size_t pj = 0; pj < pred.size(); ++pj) {
                if (pred_taken[pj])
                    continue;
                auto o = classify_pair(gold[gi], pred[pj], schema, overlap);
                if (!o || (*o == Outcome::Correct) != want_correct)
                    continue;
                if (!best || std::tie(pred_key[pj].second, pred_key[pj].first, pred[pj].category) <
                                 std::tie(pred_key[*best].second, pred_key[*best].first, pred[*best].category)) {
                    best = pj;
                    best_outcome = *o;
                }
            }
            if (best) {
                gold_done[gi] = true;
                pred_taken[*best] = true;
                out.push_back(Pairing{gi, *best, best_outcome});
            }
        }
    };
    pass(true);
    pass(false);

    for (std::size_t gi : gold_order)
        if (!gold_done[gi])
            out.push_back(Pairing{gi, std::nullopt, Outcome::Missed});
    for (std::size_t pj = 0; pj < pred.size(); ++pj)
        if (!pred_taken[pj])
            out.push_back(Pairing{std::nullopt, pj, Outcome::Spurious});
    return out;
}

struct GoldSideCounts {
    std::size_t correct = 0, incorrect = 0, partial = 0, missed = 0;
    std::size_t total() const noexcept { return correct + incorrect + partial + missed; }
    GoldSideCounts& operator+=(const GoldSideCounts& o)
    {
        correct += o.correct;
        incorrect += o.incorrect;
        partial += o.partial;
        missed += o.missed;
        return *this;
    }
};

struct PredSideCounts {
    std::size_t correct = 0, incorrect = 0, partial = 0, spurious = 0;
    std::size_t total() const noexcept { return correct + incorrect + partial + spurious; }
    PredSideCounts& operator+=(const PredSideCounts& o)
    {
        correct += o.correct;
        incorrect += o.incorrect;
        partial += o.partial;
        spurious += o.spurious;
        return *this;
    }
};

struct Scores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// P = weighted correct / predictions, R = weighted correct / gold, where
/// partial matches weigh 0.5 under the partial schema and nothing otherwise.
inline Scores score(const GoldSideCounts& g, const PredSideCounts& p, Schema schema)
{
    const double w = schema == Schema::Partial ? 0.5 : 0.0;
    const double gold_weight = static_cast<double>(g.correct) + w * static_cast<double>(g.partial);
    const double pred_weight = static_cast<double>(p.correct) + w * static_cast<double>(p.partial);
    Scores s;
    s.precision = p.total() ? pred_weight / static_cast<double>(p.total()) : 0.0;
    s.recall = g.total() ? gold_weight / static_cast<double>(g.total()) : 0.0;
    s.f1 = f1_from_pr(s.precision, s.recall);
    return s;
}

struct CategoryEval {
    GoldSideCounts gold;
    PredSideCounts pred;
    Scores scores;
    std::size_t support() const noexcept { return gold.total(); }
};

struct EvalReport {
    Schema schema = Schema::Type;
    OverlapMode mode = OverlapMode::Character;
    CategoryTable<CategoryEval> per_category{};
    GoldSideCounts gold_total;
    PredSideCounts pred_total;
    Scores micro;
    Scores macro;
    std::size_t macro_categories = 0;

    std::size_t support() const noexcept { return gold_total.total(); }
};

/// Recomputes per-category, micro and macro scores from the stored counts.
/// Macro averages over categories with gold support or predictions;
/// categories with neither are left out.
inline void finalize(EvalReport& report)
{
    report.gold_total = {};
    report.pred_total = {};
    double sp = 0, sr = 0, sf = 0;
    report.macro_categories = 0;
    for (auto& c : report.per_category) {
        c.scores = score(c.gold, c.pred, report.schema);
        report.gold_total += c.gold;
        report.pred_total += c.pred;
        if (c.gold.total() == 0 && c.pred.total() == 0)
            continue;
        sp += c.scores.precision;
        sr += c.scores.recall;
        sf += c.scores.f1;
        ++report.macro_categories;
    }
    report.micro = score(report.gold_total, report.pred_total, report.schema);
    if (report.macro_categories) {
        const double n = static_cast<double>(report.macro_categories);
        report.macro = Scores{sp / n, sr / n, sf / n};
    } else {
        report.macro = {};
    }
}

inline void tally(EvalReport& report, std::span<const SpanAnnotation> gold, std::span<const SpanAnnotation> pred,
                  std::span<const Pairing> pairings)
{
    for (const auto& p : pairings) {
        if (p.gold) {
            auto& g = report.per_category[index_of(gold[*p.gold].category)].gold;
            switch (p.outcome) {
            case Outcome::Correct: ++g.correct; break;
            case Outcome::Incorrect: ++g.incorrect; break;
            case Outcome::Partial: ++g.partial; break;
            default: ++g.missed; break;
            }
        }
        if (p.pred) {
            auto& q = report.per_category[index_of(pred[*p.pred].category)].pred;
            switch (p.outcome) {
            case Outcome::Correct: ++q.correct; break;
            case Outcome::Incorrect: ++q.incorrect; break;
            case Outcome::Partial: ++q.partial; break;
            default: ++q.spurious; break;
            }
        }
    }
}

/// Scores predictions against gold. `corpus` supplies the set of known
/// documents (and the text for token mode); without it the gold documents
/// define the corpus. Predictions for unknown documents are data errors.
inline EvalReport evaluate(const AnnotationSet& gold, const AnnotationSet& pred, Schema schema = Schema::Type,
                           const Corpus* corpus = nullptr, OverlapMode mode = OverlapMode::Character)
{
    if (mode == OverlapMode::Token && !corpus)
        throw UsageError("token-overlap evaluation needs the document corpus");

    auto known = [&](const std::string& id) {
        return corpus ? corpus->contains(id) : gold.documents().count(id) != 0;
    };
    std::set<std::string> ids;
    for (const auto& [id, spans] : gold.documents()) {
        if (corpus && !corpus->contains(id))
            throw DataError("gold annotation references unknown document '" + id + "'");
        ids.insert(id);
    }
    for (const auto& [id, spans] : pred.documents()) {
        if (!known(id))
            throw DataError("prediction references unknown document '" + id + "'");
        ids.insert(id);
    }

    EvalReport report;
    report.schema = schema;
    report.mode = mode;
    for (const auto& id : ids) {
        const auto& g = gold.spans(id);
        const auto& p = pred.spans(id);
        if (g.empty() && p.empty())
            continue;
        std::vector<Token> tokens;
        OverlapTest overlap;
        if (mode == OverlapMode::Token) {
            tokens = tokenize(corpus->at(id));
            overlap = OverlapTest(tokens);
        }
        const auto pairings = align(g, p, schema, overlap);
        tally(report, g, p, pairings);
    }
    finalize(report);
    return report;
}

} // namespace ipi
