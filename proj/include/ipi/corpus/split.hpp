// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ipi/core/error.hpp"

namespace ipi {

struct SplitRatios {
    double train = 0.60;
    double dev = 0.15;
    double test = 0.25;
};

struct CorpusSplit {
    std::uint64_t seed = 0;
    SplitRatios ratios;
    std::vector<std::string> train;
    std::vector<std::string> dev;
    std::vector<std::string> test;
};

/// Partition sizes: floor(n * ratio) each, leftover documents handed to
/// train first, then dev.
inline std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& r)
{
    const double ratios[3] = {r.train, r.dev, r.test};
    double sum = 0;
    for (double x : ratios) {
        if (!(x > 0.0) || !std::isfinite(x))
            throw UsageError("split ratios must be positive");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw UsageError("split ratios must sum to 1 (got " + std::to_string(sum) + ")");

    std::array<std::size_t, 3> sizes{};
    std::size_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
        // the epsilon keeps 0.29 * 100 == 28.999999999999996 from flooring to 28
        sizes[i] = static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratios[i] + 1e-9));
        assigned += sizes[i];
    }
    std::size_t remainder = n - assigned;
    for (std::size_t i = 0; remainder > 0; i = (i + 1) % 2, --remainder)
        ++sizes[i];
    return sizes;
}

namespace detail {

// Unbiased bounded integer from mt19937_64; std::uniform_int_distribution
// differs between standard libraries, which would break cross-platform
// determinism of the shuffle.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

} // namespace detail

/// Seeded Fisher-Yates shuffle over the sorted ids, then cut into
/// train/dev/test. Input order does not affect the result.
inline CorpusSplit split_corpus(std::vector<std::string> doc_ids, const SplitRatios& ratios, std::uint64_t seed)
{
    if (doc_ids.empty())
        throw DataError("cannot split an empty corpus");
    std::sort(doc_ids.begin(), doc_ids.end());
    if (std::adjacent_find(doc_ids.begin(), doc_ids.end()) != doc_ids.end())
        throw DataError("duplicate doc_id in corpus split input");

    const auto sizes = split_sizes(doc_ids.size(), ratios);

    std::mt19937_64 rng(seed);
    for (std::size_t i = doc_ids.size() - 1; i > 0; --i)
        std::swap(doc_ids[i], doc_ids[detail::bounded(rng, i + 1)]);

    CorpusSplit split{seed, ratios, {}, {}, {}};
    auto it = doc_ids.begin();
    split.train.assign(it, it + static_cast<std::ptrdiff_t>(sizes[0]));
    it += static_cast<std::ptrdiff_t>(sizes[0]);
    split.dev.assign(it, it + static_cast<std::ptrdiff_t>(sizes[1]));
    it += static_cast<std::ptrdiff_t>(sizes[1]);
    split.test.assign(it, doc_ids.end());
    return split;
}

} // namespace ipi
