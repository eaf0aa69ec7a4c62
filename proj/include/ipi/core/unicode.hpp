// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// UTF-8 <-> code point conversion and the small amount of character
// classification the tokenizer and matchers need. All offsets exposed by the
// library count Unicode scalar values, so text is held as std::u32string.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ipi/core/error.hpp"

namespace ipi::unicode {

inline std::u32string decode_utf8(std::string_view in)
{
    std::u32string out;
    out.reserve(in.size());
    std::size_t i = 0;
    while (i < in.size()) {
        const auto lead = static_cast<unsigned char>(in[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (lead < 0x80) {
            cp = lead;
            len = 1;
        } else if ((lead & 0xE0) == 0xC0) {
            cp = lead & 0x1F;
            len = 2;
        } else if ((lead & 0xF0) == 0xE0) {
            cp = lead & 0x0F;
            len = 3;
        } else if ((lead & 0xF8) == 0xF0) {
            cp = lead & 0x07;
            len = 4;
        } else {
            throw DataError("invalid UTF-8 lead byte at byte offset " + std::to_string(i));
        }
        if (i + len > in.size())
            throw DataError("truncated UTF-8 sequence at byte offset " + std::to_string(i));
        for (std::size_t k = 1; k < len; ++k) {
            const auto cont = static_cast<unsigned char>(in[i + k]);
            if ((cont & 0xC0) != 0x80)
                throw DataError("invalid UTF-8 continuation byte at byte offset " + std::to_string(i + k));
            cp = (cp << 6) | (cont & 0x3F);
        }
        const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
        if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            throw DataError("invalid UTF-8 scalar value at byte offset " + std::to_string(i));
        out.push_back(cp);
        i += len;
    }
    return out;
}

inline void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode_utf8(std::u32string_view in)
{
    std::string out;
    out.reserve(in.size());
    for (char32_t cp : in)
        append_utf8(out, cp);
    return out;
}

/// Byte offset of every code point in the UTF-8 encoding of `text`, plus a
/// trailing entry holding the total byte length.
inline std::vector<std::size_t> utf8_byte_offsets(std::u32string_view text)
{
    std::vector<std::size_t> offsets;
    offsets.reserve(text.size() + 1);
    std::size_t pos = 0;
    for (char32_t cp : text) {
        offsets.push_back(pos);
        pos += cp < 0x80 ? 1 : cp < 0x800 ? 2 : cp < 0x10000 ? 3 : 4;
    }
    offsets.push_back(pos);
    return offsets;
}

// Unicode White_Space property.
constexpr bool is_space(char32_t c) noexcept
{
    return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
           (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F ||
           c == 0x3000;
}

/// Punctuation and symbols. ASCII is classified exactly; outside ASCII the
/// common punctuation/symbol blocks are covered and everything else that is
/// not whitespace counts as a word character (letters, digits, marks, CJK).
constexpr bool is_punct(char32_t c) noexcept
{
    if (c < 0x80)
        return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
               (c >= 0x7B && c <= 0x7E);
    if (c >= 0xA1 && c <= 0xBF)
        return c != 0xAA && c != 0xB2 && c != 0xB3 && c != 0xB5 && c != 0xB9 && c != 0xBA &&
               (c < 0xBC || c > 0xBE);
    return c == 0xD7 || c == 0xF7 || (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
           (c >= 0x20A0 && c <= 0x20CF) || (c >= 0x2100 && c <= 0x214F) || (c >= 0x2190 && c <= 0x2BFF) ||
           (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3020) || (c >= 0xFE10 && c <= 0xFE6F) ||
           (c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20) || (c >= 0xFF3B && c <= 0xFF40) ||
           (c >= 0xFF5B && c <= 0xFF65);
}

constexpr bool is_word(char32_t c) noexcept
{
    return !is_space(c) && !is_punct(c) && c >= 0x20 && c != 0x7F;
}

/// Simple length-preserving lowercase mapping for ASCII, Latin-1, Greek and
/// basic Cyrillic. Offsets in a lowered string line up with the original.
constexpr char32_t to_lower(char32_t c) noexcept
{
    if (c >= U'A' && c <= U'Z')
        return c + 0x20;
    if (c < 0x80)
        return c;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7)
        return c + 0x20;
    if ((c >= 0x391 && c <= 0x3A9 && c != 0x3A2))
        return c + 0x20;
    if (c >= 0x410 && c <= 0x42F)
        return c + 0x20;
    if (c >= 0x400 && c <= 0x40F)
        return c + 0x50;
    return c;
}

inline std::u32string to_lower(std::u32string_view s)
{
    std::u32string out(s);
    for (auto& c : out)
        c = to_lower(c);
    return out;
}

} // namespace ipi::unicode
