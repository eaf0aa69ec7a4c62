// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>
#include <vector>

#include "ipi/core/model.hpp"
#include "ipi/core/unicode.hpp"

namespace ipi {

/// Maximal runs of word characters form one token; every other
/// non-whitespace character is a token of its own.
inline std::vector<Token> tokenize(std::u32string_view text)
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        const char32_t c = text[i];
        if (unicode::is_space(c)) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        if (unicode::is_word(c))
            while (j < text.size() && unicode::is_word(text[j]))
                ++j;
        tokens.push_back(Token{unicode::encode_utf8(text.substr(i, j - i)), i, j});
        i = j;
    }
    return tokens;
}

inline std::vector<Token> tokenize(const Document& doc)
{
    return tokenize(std::u32string_view(doc.text()));
}

} // namespace ipi
