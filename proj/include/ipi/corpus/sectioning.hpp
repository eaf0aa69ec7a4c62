// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ipi/core/error.hpp"
#include "ipi/core/model.hpp"
#include "ipi/core/span_ops.hpp"

namespace ipi {

struct Section {
    std::string doc_id;
    std::size_t section_index = 0;
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t token_count = 0;

    friend bool operator==(const Section&, const Section&) = default;
};

namespace detail {

inline std::size_t tokens_between(std::span<const Token> tokens, std::size_t start, std::size_t end)
{
    auto r = token_range(tokens, start, end);
    return r.second - r.first;
}

} // namespace detail

/// Positions directly after each newline (excluding the end of text): the
/// only places a section may begin.
inline std::vector<std::size_t> newline_boundaries(const Document& doc)
{
    std::vector<std::size_t> out;
    const auto& text = doc.text();
    for (std::size_t i = 0; i + 1 < text.size(); ++i)
        if (text[i] == U'\n')
            out.push_back(i + 1);
    return out;
}

/// A boundary is legal when no span strictly straddles it.
inline bool is_legal_boundary(std::size_t pos, std::span<const SpanAnnotation> spans)
{
    return std::none_of(spans.begin(), spans.end(), [&](const SpanAnnotation& s) { return s.start < pos && pos < s.end; });
}

/// Splits a document into contiguous sections of at most `max_tokens`
/// tokens, cutting only after newlines and never through a span. Each
/// section extends to the furthest legal boundary that keeps it in budget.
inline std::vector<Section> section_document(const Document& doc, std::span<const Token> tokens,
                                             std::size_t max_tokens, std::span<const SpanAnnotation> spans)
{
    if (max_tokens == 0)
        throw UsageError("section_document: max_tokens must be positive");

    const auto newlines = newline_boundaries(doc);

    // every line must fit on its own
    {
        std::size_t line_start = 0;
        std::size_t line_no = 1;
        auto check = [&](std::size_t line_end) {
            const auto n = detail::tokens_between(tokens, line_start, line_end);
            if (n > max_tokens)
                throw SectioningError("document '" + doc.doc_id() + "' line " + std::to_string(line_no) + " has " +
                                      std::to_string(n) + " tokens, more than max_tokens=" +
                                      std::to_string(max_tokens));
        };
        for (auto b : newlines) {
            check(b);
            line_start = b;
            ++line_no;
        }
        check(doc.size());
    }

    std::vector<std::size_t> legal;
    for (auto b : newlines)
        if (is_legal_boundary(b, spans))
            legal.push_back(b);

    std::vector<Section> out;
    std::size_t start = 0;
    auto next = legal.begin();
    while (true) {
        const auto rest = detail::tokens_between(tokens, start, doc.size());
        if (rest <= max_tokens) {
            out.push_back(Section{doc.doc_id(), out.size(), start, doc.size(), rest});
            break;
        }
        // furthest legal boundary after `start` that keeps the section within budget
        std::size_t best = start;
        std::size_t best_count = 0;
        for (auto it = next; it != legal.end(); ++it) {
            const auto n = detail::tokens_between(tokens, start, *it);
            if (n > max_tokens)
                break;
            best = *it;
            best_count = n;
            next = it + 1;
        }
        if (best == start)
            throw SectioningError("document '" + doc.doc_id() + "': no legal section boundary after offset " +
                                  std::to_string(start) + " within " + std::to_string(max_tokens) +
                                  " tokens; an annotation spans the candidate newlines");
        out.push_back(Section{doc.doc_id(), out.size(), start, best, best_count});
        start = best;
    }
    return out;
}

inline std::vector<Token> section_tokens(const Section& section, std::span<const Token> tokens)
{
    auto [first, last] = token_range(tokens, section.start, section.end);
    return {tokens.begin() + static_cast<std::ptrdiff_t>(first), tokens.begin() + static_cast<std::ptrdiff_t>(last)};
}

/// Spans that lie inside the section, with offsets made relative to its start.
inline std::vector<SpanAnnotation> spans_in_section(const Section& section, std::span<const SpanAnnotation> spans)
{
    std::vector<SpanAnnotation> out;
    for (const auto& s : spans) {
        if (s.start >= section.start && s.end <= section.end) {
            auto shifted = s;
            shifted.start -= section.start;
            shifted.end -= section.start;
            out.push_back(std::move(shifted));
        }
    }
    return out;
}

} // namespace ipi
