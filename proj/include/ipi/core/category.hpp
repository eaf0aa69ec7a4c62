// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ipi/core/error.hpp"

namespace ipi {

/// The nine indirect-identifier classes. Declaration order is the schema
/// order used for tables, reports and the UI's 1-9 shortcuts.
enum class Category : std::uint8_t {
    Body,
    Details,
    Sec,
    Family,
    Facility,
    RelTime,
    Lifestyle,
    PhiRef,
    Other,
};

inline constexpr std::size_t kCategoryCount = 9;

inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::Body,     Category::Details, Category::Sec,       Category::Family, Category::Facility,
    Category::RelTime,  Category::Lifestyle, Category::PhiRef, Category::Other,
};

constexpr std::size_t index_of(Category c) noexcept
{
    return static_cast<std::size_t>(c);
}

constexpr std::string_view to_string(Category c) noexcept
{
    switch (c) {
    case Category::Body: return "BODY";
    case Category::Details: return "DETAILS";
    case Category::Sec: return "SEC";
    case Category::Family: return "FAMILY";
    case Category::Facility: return "FACILITY";
    case Category::RelTime: return "RELTIME";
    case Category::Lifestyle: return "LIFESTYLE";
    case Category::PhiRef: return "PHI_REF";
    case Category::Other: return "OTHER";
    }
    return "?";
}

constexpr std::string_view description(Category c) noexcept
{
    switch (c) {
    case Category::Body:
        return "Appearance and body: weight, height, scars, tattoos, piercings and other body modifications";
    case Category::Details:
        return "Event details: accidents or incidents behind an injury, notable behaviour in the facility, "
               "statements and complaints made by the person";
    case Category::Sec:
        return "Socio-economic or criminal history: employment, insurance, legal guardianship, housing or "
               "social status";
    case Category::Family:
        return "Family information: family structure, family medical history, family involvement in care";
    case Category::Facility:
        return "Facilities and personnel: hospitals, units, labs, departments, consulting teams, rooms, "
               "outside doctors";
    case Category::RelTime:
        return "Age and time: ages, clock times, postoperative or hospital day counts, times of lab draws "
               "and medication";
    case Category::Lifestyle:
        return "Lifestyle and hobbies: sports, diet, instruments, tobacco, alcohol and substance use";
    case Category::PhiRef:
        return "Direct-identifier references: undetected PHI or indirect descriptions of one such as an "
               "address";
    case Category::Other:
        return "Other sensitive non-medical information: language, ethnicity, sexual orientation";
    }
    return "";
}

/// Accepts the canonical names plus the documented aliases:
/// SOCIO / SOCIO_ECONOMIC -> SEC, DIRECT_ID / DIRECTID -> PHI_REF,
/// FCLT -> FACILITY, LFSTL -> LIFESTYLE.
constexpr std::optional<Category> try_parse_category(std::string_view s) noexcept
{
    for (Category c : kAllCategories)
        if (to_string(c) == s)
            return c;
    if (s == "SOCIO" || s == "SOCIO_ECONOMIC")
        return Category::Sec;
    if (s == "DIRECT_ID" || s == "DIRECTID")
        return Category::PhiRef;
    if (s == "FCLT")
        return Category::Facility;
    if (s == "LFSTL")
        return Category::Lifestyle;
    return std::nullopt;
}

inline Category parse_category(std::string_view s)
{
    if (auto c = try_parse_category(s))
        return *c;
    throw DataError("unknown category '" + std::string(s) + "'");
}

/// Conflict priority, rarest and highest-risk first. Lower rank wins.
constexpr int priority_rank(Category c) noexcept
{
    switch (c) {
    case Category::PhiRef: return 0;
    case Category::Details: return 1;
    case Category::Sec: return 2;
    case Category::Family: return 3;
    case Category::Body: return 4;
    case Category::Lifestyle: return 5;
    case Category::Facility: return 6;
    case Category::RelTime: return 7;
    case Category::Other: return 8;
    }
    return 9;
}

constexpr bool higher_priority(Category a, Category b) noexcept
{
    return priority_rank(a) < priority_rank(b);
}

/// Per-category table indexed by schema order.
template <typename T>
using CategoryTable = std::array<T, kCategoryCount>;

} // namespace ipi
