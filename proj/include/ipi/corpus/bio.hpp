// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ipi/core/category.hpp"
#include "ipi/core/model.hpp"
#include "ipi/core/span_ops.hpp"

namespace ipi {

struct BioSequence {
    std::string doc_id;
    std::size_t section_index = 0;
    std::vector<Token> tokens;
    std::vector<std::string> labels;
};

inline std::string bio_label(char prefix, Category c)
{
    std::string out(1, prefix);
    out += '-';
    out += to_string(c);
    return out;
}

/// Token-level BIO encoding. A token takes a span's category when it shares
/// at least one character with the span; where categories compete the higher
/// priority one wins. Same-category spans touching a common token fuse.
inline BioSequence spans_to_bio(const Document& doc, std::span<const Token> tokens,
                                std::span<const SpanAnnotation> spans)
{
    struct Run {
        std::size_t first, last; // token indices, half-open
        Category category;
    };

    CategoryTable<std::vector<Run>> runs{};
    for (const auto& s : spans) {
        if (s.doc_id != doc.doc_id())
            throw DataError("span for '" + s.doc_id + "' passed with document '" + doc.doc_id() + "'");
        if (s.start >= s.end || s.end > doc.size())
            throw DataError("span [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                            ") out of bounds for '" + doc.doc_id() + "' (length " + std::to_string(doc.size()) + ")");
        const auto [first, last] = token_range(tokens, s.start, s.end);
        if (first < last)
            runs[index_of(s.category)].push_back(Run{first, last, s.category});
    }

    // per token: winning run id, encoded as (category index, run index)
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> owner_cat(tokens.size(), kNone);
    std::vector<std::size_t> owner_run(tokens.size(), kNone);

    for (Category c : kAllCategories) {
        auto& list = runs[index_of(c)];
        std::sort(list.begin(), list.end(), [](const Run& a, const Run& b) { return a.first < b.first; });
        std::vector<Run> fused;
        for (const auto& r : list) {
            if (!fused.empty() && r.first < fused.back().last)
                fused.back().last = std::max(fused.back().last, r.last);
            else
                fused.push_back(r);
        }
        list = std::move(fused);
        for (std::size_t ri = 0; ri < list.size(); ++ri) {
            for (std::size_t t = list[ri].first; t < list[ri].last; ++t) {
                if (owner_cat[t] == kNone || higher_priority(c, static_cast<Category>(owner_cat[t]))) {
                    owner_cat[t] = index_of(c);
                    owner_run[t] = ri;
                }
            }
        }
    }

    BioSequence seq{doc.doc_id(), 0, std::vector<Token>(tokens.begin(), tokens.end()), {}};
    seq.labels.reserve(tokens.size());
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (owner_cat[t] == kNone) {
            seq.labels.emplace_back("O");
            continue;
        }
        const bool continues = t > 0 && owner_cat[t - 1] == owner_cat[t] && owner_run[t - 1] == owner_run[t];
        seq.labels.push_back(bio_label(continues ? 'I' : 'B', static_cast<Category>(owner_cat[t])));
    }
    return seq;
}

struct ParsedBioLabel {
    char prefix; // 'O', 'B' or 'I'
    std::optional<Category> category;
};

inline ParsedBioLabel parse_bio_label(const std::string& label)
{
    if (label == "O")
        return {'O', std::nullopt};
    if (label.size() > 2 && (label[0] == 'B' || label[0] == 'I') && label[1] == '-') {
        auto c = try_parse_category(std::string_view(label).substr(2));
        if (c)
            return {label[0], c};
    }
    throw DataError("malformed BIO label '" + label + "'");
}

/// Inverse of spans_to_bio: one span per maximal B/I run, snapped to the
/// run's first token start and last token end.
inline std::vector<SpanAnnotation> bio_to_spans(const BioSequence& seq, const Document& doc,
                                                const std::string& source = {})
{
    if (seq.labels.size() != seq.tokens.size())
        throw DataError("BIO sequence for '" + seq.doc_id + "' has " + std::to_string(seq.tokens.size()) +
                        " tokens but " + std::to_string(seq.labels.size()) + " labels");
    std::vector<SpanAnnotation> out;
    std::optional<Category> open;
    std::size_t open_start = 0;
    std::size_t open_end = 0;
    auto close = [&] {
        if (open)
            out.push_back(make_span(doc, open_start, open_end, *open, source));
        open.reset();
    };
    for (std::size_t i = 0; i < seq.labels.size(); ++i) {
        const auto parsed = parse_bio_label(seq.labels[i]);
        const auto& tok = seq.tokens[i];
        if (parsed.prefix == 'O') {
            close();
        } else if (parsed.prefix == 'B') {
            close();
            open = parsed.category;
            open_start = tok.start;
            open_end = tok.end;
        } else {
            if (!open || *open != *parsed.category)
                throw DataError("label '" + seq.labels[i] + "' at token " + std::to_string(i) + " of '" +
                                seq.doc_id + "' does not continue a " + std::string(to_string(*parsed.category)) +
                                " run");
            open_end = tok.end;
        }
    }
    close();
    return out;
}

/// True when no I-X label lacks an immediately preceding B-X or I-X.
inline bool is_well_formed(const BioSequence& seq)
{
    if (seq.labels.size() != seq.tokens.size())
        return false;
    std::optional<Category> prev;
    for (const auto& label : seq.labels) {
        ParsedBioLabel p;
        try {
            p = parse_bio_label(label);
        } catch (const DataError&) {
            return false;
        }
        if (p.prefix == 'I' && prev != p.category)
            return false;
        prev = p.category;
    }
    return true;
}

} // namespace ipi
