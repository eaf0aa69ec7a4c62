// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "ipi/core/annotation_set.hpp"
#include "ipi/core/category.hpp"

namespace ipi {

struct CorpusStats {
    CategoryTable<std::size_t> counts{};
    CategoryTable<double> proportions{};
    std::size_t total = 0;
    // set when total == 0: proportions are reported as zeros
    bool proportions_undefined = false;
};

inline CorpusStats corpus_stats(const AnnotationSet& set)
{
    CorpusStats stats;
    for (const auto& [_, spans] : set.documents())
        for (const auto& s : spans)
            ++stats.counts[index_of(s.category)];
    for (auto n : stats.counts)
        stats.total += n;
    stats.proportions_undefined = stats.total == 0;
    if (stats.total > 0)
        for (std::size_t i = 0; i < kCategoryCount; ++i)
            stats.proportions[i] = static_cast<double>(stats.counts[i]) / static_cast<double>(stats.total);
    return stats;
}

} // namespace ipi
