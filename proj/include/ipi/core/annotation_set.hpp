// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ipi/core/model.hpp"
#include "ipi/core/span_ops.hpp"

namespace ipi {

/// Spans from one annotator or system, grouped by document. Duplicates are
/// removed and overlapping same-category spans are union-merged on insert,
/// so every per-document list is sorted and same-category disjoint.
class AnnotationSet {
public:
    AnnotationSet() = default;
    explicit AnnotationSet(std::string source) : source_(std::move(source)) {}

    static AnnotationSet from_spans(std::string source, std::span<const SpanAnnotation> spans)
    {
        AnnotationSet set(std::move(source));
        std::map<std::string, std::vector<SpanAnnotation>> grouped;
        for (const auto& s : spans)
            grouped[s.doc_id].push_back(s);
        for (auto& [id, list] : grouped)
            set.by_doc_[id] = merge_same_category(list);
        return set;
    }

    void add(SpanAnnotation span)
    {
        auto& list = by_doc_[span.doc_id];
        list.push_back(std::move(span));
        list = merge_same_category(list);
    }

    /// Makes a document known to the set even when it has no spans.
    void touch(const std::string& doc_id) { by_doc_[doc_id]; }

    const std::string& source() const noexcept { return source_; }

    const std::vector<SpanAnnotation>& spans(const std::string& doc_id) const
    {
        static const std::vector<SpanAnnotation> empty;
        auto it = by_doc_.find(doc_id);
        return it == by_doc_.end() ? empty : it->second;
    }

    const std::map<std::string, std::vector<SpanAnnotation>>& documents() const noexcept { return by_doc_; }

    std::vector<SpanAnnotation> all() const
    {
        std::vector<SpanAnnotation> out;
        for (const auto& [_, list] : by_doc_)
            out.insert(out.end(), list.begin(), list.end());
        return out;
    }

    std::size_t size() const noexcept
    {
        std::size_t n = 0;
        for (const auto& [_, list] : by_doc_)
            n += list.size();
        return n;
    }

    bool empty() const noexcept { return size() == 0; }

private:
    std::string source_;
    std::map<std::string, std::vector<SpanAnnotation>> by_doc_;
};

} // namespace ipi
