// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "ipi/core/category.hpp"
#include "ipi/core/error.hpp"
#include "ipi/core/unicode.hpp"

namespace ipi {

/// Source text with stable code point offsets. The text cannot change after
/// construction; every span and token offset refers to it.
class Document {
public:
    Document() = default;
    Document(std::string doc_id, std::u32string text, std::map<std::string, std::string> meta = {})
        : doc_id_(std::move(doc_id)), text_(std::move(text)), meta_(std::move(meta))
    {
    }

    static Document from_utf8(std::string doc_id, std::string_view utf8,
                              std::map<std::string, std::string> meta = {})
    {
        return Document(std::move(doc_id), unicode::decode_utf8(utf8), std::move(meta));
    }

    const std::string& doc_id() const noexcept { return doc_id_; }
    const std::u32string& text() const noexcept { return text_; }
    const std::map<std::string, std::string>& meta() const noexcept { return meta_; }
    std::size_t size() const noexcept { return text_.size(); }

    std::u32string_view view(std::size_t start, std::size_t end) const
    {
        return std::u32string_view(text_).substr(start, end - start);
    }

    std::string slice(std::size_t start, std::size_t end) const { return unicode::encode_utf8(view(start, end)); }

    std::string utf8() const { return unicode::encode_utf8(text_); }

private:
    std::string doc_id_;
    std::u32string text_;
    std::map<std::string, std::string> meta_;
};

struct Token {
    std::string text;
    std::size_t start = 0;
    std::size_t end = 0;

    friend bool operator==(const Token&, const Token&) = default;
};

struct SpanAnnotation {
    std::string doc_id;
    std::size_t start = 0;
    std::size_t end = 0;
    Category category = Category::Other;
    std::string snippet;
    std::string source;
    std::uint64_t version = 0;

    std::size_t length() const noexcept { return end - start; }

    friend bool operator==(const SpanAnnotation&, const SpanAnnotation&) = default;
};

/// Canonical span order: start, end, schema order of category.
inline bool span_less(const SpanAnnotation& a, const SpanAnnotation& b) noexcept
{
    return std::tie(a.start, a.end, a.category) < std::tie(b.start, b.end, b.category);
}

inline void sort_spans(std::vector<SpanAnnotation>& spans)
{
    std::stable_sort(spans.begin(), spans.end(), span_less);
}

/// Builds a span whose snippet is copied from the document.
inline SpanAnnotation make_span(const Document& doc, std::size_t start, std::size_t end, Category category,
                                std::string source = {}, std::uint64_t version = 0)
{
    if (start >= end)
        throw DataError("span [" + std::to_string(start) + "," + std::to_string(end) + ") in document '" +
                        doc.doc_id() + "' is empty or reversed");
    if (end > doc.size())
        throw DataError("span [" + std::to_string(start) + "," + std::to_string(end) + ") exceeds document '" +
                        doc.doc_id() + "' of length " + std::to_string(doc.size()));
    return SpanAnnotation{doc.doc_id(), start, end, category, doc.slice(start, end), std::move(source), version};
}

/// Checks bounds, ordering, document id and snippet integrity.
inline void validate_span(const Document& doc, const SpanAnnotation& span)
{
    if (span.doc_id != doc.doc_id())
        throw DataError("span refers to document '" + span.doc_id + "' but was checked against '" +
                        doc.doc_id() + "'");
    if (span.start >= span.end)
        throw DataError("span [" + std::to_string(span.start) + "," + std::to_string(span.end) + ") in '" +
                        span.doc_id + "' is empty or reversed");
    if (span.end > doc.size())
        throw DataError("span [" + std::to_string(span.start) + "," + std::to_string(span.end) + ") exceeds '" +
                        span.doc_id + "' of length " + std::to_string(doc.size()));
    if (span.snippet != doc.slice(span.start, span.end))
        throw DataError("stale snippet for span [" + std::to_string(span.start) + "," + std::to_string(span.end) +
                        ") in '" + span.doc_id + "': expected \"" + doc.slice(span.start, span.end) + "\", got \"" +
                        span.snippet + "\"");
}

/// Documents keyed by doc_id, iterated in id order.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<Document> docs)
    {
        for (auto& d : docs)
            add(std::move(d));
    }

    void add(Document doc)
    {
        auto id = doc.doc_id();
        if (!docs_.emplace(id, std::move(doc)).second)
            throw DataError("duplicate doc_id '" + id + "'");
    }

    bool contains(const std::string& id) const { return docs_.count(id) != 0; }

    const Document* find(const std::string& id) const
    {
        auto it = docs_.find(id);
        return it == docs_.end() ? nullptr : &it->second;
    }

    const Document& at(const std::string& id) const
    {
        if (const auto* d = find(id))
            return *d;
        throw DataError("unknown doc_id '" + id + "'");
    }

    std::vector<std::string> ids() const
    {
        std::vector<std::string> out;
        out.reserve(docs_.size());
        for (const auto& [id, _] : docs_)
            out.push_back(id);
        return out;
    }

    std::size_t size() const noexcept { return docs_.size(); }
    bool empty() const noexcept { return docs_.empty(); }
    auto begin() const { return docs_.begin(); }
    auto end() const { return docs_.end(); }

private:
    std::map<std::string, Document> docs_;
};

} // namespace ipi
