// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ipi/core/model.hpp"

namespace ipi {

/// Half-open character-interval overlap.
inline bool overlaps(const SpanAnnotation& a, const SpanAnnotation& b)
{
    if (a.doc_id != b.doc_id)
        throw UsageError("overlaps: spans belong to different documents ('" + a.doc_id + "' vs '" + b.doc_id + "')");
    return std::max(a.start, b.start) < std::min(a.end, b.end);
}

/// Indices [first, last) of the tokens that share at least one character with [start, end).
/// Tokens must be sorted and non-overlapping.
inline std::pair<std::size_t, std::size_t> token_range(std::span<const Token> tokens, std::size_t start,
                                                       std::size_t end)
{
    auto first = std::partition_point(tokens.begin(), tokens.end(), [&](const Token& t) { return t.end <= start; });
    auto last = std::partition_point(first, tokens.end(), [&](const Token& t) { return t.start < end; });
    return {static_cast<std::size_t>(first - tokens.begin()), static_cast<std::size_t>(last - tokens.begin())};
}

/// Number of tokens that character-overlap both spans.
inline std::size_t token_overlap_count(const SpanAnnotation& a, const SpanAnnotation& b,
                                       std::span<const Token> tokens)
{
    if (a.doc_id != b.doc_id)
        throw UsageError("token_overlap_count: spans belong to different documents ('" + a.doc_id + "' vs '" +
                         b.doc_id + "')");
    const auto [a0, a1] = token_range(tokens, a.start, a.end);
    const auto [b0, b1] = token_range(tokens, b.start, b.end);
    const auto lo = std::max(a0, b0);
    const auto hi = std::min(a1, b1);
    return hi > lo ? hi - lo : 0;
}

enum class OverlapMode { Token, Character };

/// Overlap predicate parameterised by granularity. In token mode two spans
/// overlap iff some token touches both; spans touching no token overlap nothing.
class OverlapTest {
public:
    OverlapTest() = default;
    explicit OverlapTest(std::span<const Token> tokens) : mode_(OverlapMode::Token), tokens_(tokens) {}

    OverlapMode mode() const noexcept { return mode_; }

    bool operator()(const SpanAnnotation& a, const SpanAnnotation& b) const
    {
        return mode_ == OverlapMode::Character ? overlaps(a, b) : token_overlap_count(a, b, tokens_) > 0;
    }

    /// Interval in the metric's own coordinates (characters or token indices);
    /// two spans overlap iff their key intervals intersect. nullopt for a span
    /// that covers no token in token mode.
    std::optional<std::pair<std::size_t, std::size_t>> key(const SpanAnnotation& s) const
    {
        if (mode_ == OverlapMode::Character)
            return std::pair{s.start, s.end};
        auto r = token_range(tokens_, s.start, s.end);
        if (r.first >= r.second)
            return std::nullopt;
        return r;
    }

private:
    OverlapMode mode_ = OverlapMode::Character;
    std::span<const Token> tokens_;
};

/// Union-merges overlapping spans of the same category. The merged snippet is
/// assembled from the constituent snippets, so no document is needed.
inline std::vector<SpanAnnotation> merge_same_category(std::span<const SpanAnnotation> spans)
{
    if (spans.empty())
        return {};
    for (const auto& s : spans)
        if (s.doc_id != spans.front().doc_id)
            throw UsageError("merge_same_category: spans from different documents");

    std::vector<SpanAnnotation> sorted(spans.begin(), spans.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const SpanAnnotation& a, const SpanAnnotation& b) {
        return std::tie(a.category, a.start, a.end) < std::tie(b.category, b.start, b.end);
    });

    std::vector<SpanAnnotation> out;
    std::u32string merged_text;
    for (auto& s : sorted) {
        if (!out.empty() && out.back().category == s.category && s.start < out.back().end) {
            auto& m = out.back();
            if (s.end > m.end) {
                // Snippets of raw (unvalidated) spans may be absent; the merged
                // snippet is then left empty rather than guessed.
                const auto piece = unicode::decode_utf8(s.snippet);
                if (piece.size() == s.length() && merged_text.size() == m.length())
                    merged_text.append(piece, m.end - s.start, std::u32string::npos);
                else
                    merged_text.clear();
                m.end = s.end;
                m.snippet = unicode::encode_utf8(merged_text);
            }
            m.version = std::max(m.version, s.version);
            continue;
        }
        merged_text = unicode::decode_utf8(s.snippet);
        out.push_back(std::move(s));
    }
    sort_spans(out);
    return out;
}

/// Snaps a span outward to the boundaries of the tokens it touches.
inline std::optional<SpanAnnotation> snap_to_tokens(const Document& doc, const SpanAnnotation& s,
                                                    std::span<const Token> tokens)
{
    const auto [first, last] = token_range(tokens, s.start, s.end);
    if (first >= last)
        return std::nullopt;
    auto out = make_span(doc, tokens[first].start, tokens[last - 1].end, s.category, s.source, s.version);
    return out;
}

} // namespace ipi
