// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Policy-driven anonymization of curated spans with an offset-level audit
// trail. SUPPRESS deletes a region, PLACEHOLDER replaces it with `[CATEGORY]`
// (or `[CATEGORY-n]` when counters are enabled) and KEEP leaves it alone.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ipi/core/category.hpp"
#include "ipi/core/model.hpp"
#include "ipi/core/unicode.hpp"

namespace ipi {

enum class Action { Suppress, Placeholder, Keep };

constexpr std::string_view to_string(Action a) noexcept
{
    switch (a) {
    case Action::Suppress: return "SUPPRESS";
    case Action::Placeholder: return "PLACEHOLDER";
    case Action::Keep: return "KEEP";
    }
    return "?";
}

inline Action parse_action(std::string_view s)
{
    for (Action a : {Action::Suppress, Action::Placeholder, Action::Keep})
        if (to_string(a) == s)
            return a;
    throw DataError("unknown redaction action '" + std::string(s) + "' (expected SUPPRESS, PLACEHOLDER or KEEP)");
}

class RedactionPolicy {
public:
    explicit RedactionPolicy(Action default_action = Action::Placeholder) { actions_.fill(default_action); }

    static RedactionPolicy uniform(Action a) { return RedactionPolicy(a); }

    RedactionPolicy& set(Category c, Action a)
    {
        actions_[index_of(c)] = a;
        return *this;
    }

    RedactionPolicy& with_counters(bool on = true)
    {
        counters_ = on;
        return *this;
    }

    Action action(Category c) const noexcept { return actions_[index_of(c)]; }
    bool counters() const noexcept { return counters_; }

    /// Canonical text form; the fingerprint hashes exactly this.
    std::string canonical() const
    {
        std::string out;
        for (Category c : kAllCategories) {
            out += to_string(c);
            out += '=';
            out += to_string(action(c));
            out += ';';
        }
        out += counters_ ? "counters=1" : "counters=0";
        return out;
    }

    /// FNV-1a 64 of the canonical form, as 16 hex digits.
    std::string fingerprint() const
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char ch : canonical()) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        static constexpr char kHex[] = "0123456789abcdef";
        std::string out(16, '0');
        for (int i = 15; i >= 0; --i, h >>= 4)
            out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
        return out;
    }

private:
    CategoryTable<Action> actions_{};
    bool counters_ = false;
};

/// One entry of the offset map. Surviving text maps to an equal-length
/// output interval; a redacted region maps to its placeholder interval, or to
/// an empty interval with `removed` set when suppressed.
struct OffsetMapping {
    std::size_t orig_start = 0;
    std::size_t orig_end = 0;
    std::size_t out_start = 0;
    std::size_t out_end = 0;
    bool redacted = false;
    bool removed = false;
    std::optional<Category> category; // label of a redacted region

    friend bool operator==(const OffsetMapping&, const OffsetMapping&) = default;
};

struct RedactionResult {
    std::string doc_id;
    std::u32string text;
    std::vector<OffsetMapping> offset_map;
    CategoryTable<std::size_t> replacements{}; // redacted regions per label
    std::string policy_fingerprint;

    std::string utf8() const { return unicode::encode_utf8(text); }
};

struct RedactionRegion {
    std::size_t start = 0;
    std::size_t end = 0;
    Category category = Category::Other;
    Action action = Action::Suppress;
};

/// Actionable spans unioned into disjoint regions. A region carries the
/// highest-priority category among its spans and that category's action.
inline std::vector<RedactionRegion> redaction_regions(std::span<const SpanAnnotation> spans,
                                                      const RedactionPolicy& policy)
{
    std::vector<RedactionRegion> regions;
    for (const auto& s : spans)
        if (policy.action(s.category) != Action::Keep)
            regions.push_back({s.start, s.end, s.category, policy.action(s.category)});
    std::sort(regions.begin(), regions.end(),
              [](const RedactionRegion& a, const RedactionRegion& b) { return a.start < b.start; });
    std::vector<RedactionRegion> merged;
    for (const auto& r : regions) {
        if (!merged.empty() && r.start < merged.back().end) {
            auto& m = merged.back();
            m.end = std::max(m.end, r.end);
            if (higher_priority(r.category, m.category)) {
                m.category = r.category;
                m.action = r.action;
            }
        } else {
            merged.push_back(r);
        }
    }
    return merged;
}

inline std::u32string placeholder_text(Category c, std::optional<std::size_t> counter = std::nullopt)
{
    std::string s = "[";
    s += to_string(c);
    if (counter) {
        s += '-';
        s += std::to_string(*counter);
    }
    s += ']';
    return unicode::decode_utf8(s);
}

inline RedactionResult redact(const Document& doc, std::span<const SpanAnnotation> spans, const RedactionPolicy& policy)
{
    for (const auto& s : spans) {
        if (s.doc_id != doc.doc_id())
            throw DataError("span for '" + s.doc_id + "' passed to redact '" + doc.doc_id() + "'");
        if (s.start >= s.end || s.end > doc.size())
            throw DataError("span [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                            ") out of bounds for '" + doc.doc_id() + "' (length " + std::to_string(doc.size()) + ")");
    }

    const auto regions = redaction_regions(spans, policy);
    const auto& text = doc.text();

    // Replacement strings are fixed left-to-right (counters number regions in
    // reading order); splicing then runs right-to-left so earlier offsets
    // stay valid while later ones are rewritten.
    RedactionResult result;
    result.doc_id = doc.doc_id();
    result.policy_fingerprint = policy.fingerprint();
    std::vector<std::u32string> replacement(regions.size());
    CategoryTable<std::size_t> counters{};
    for (std::size_t k = 0; k < regions.size(); ++k) {
        const auto& r = regions[k];
        ++result.replacements[index_of(r.category)];
        if (r.action == Action::Placeholder) {
            std::optional<std::size_t> n;
            if (policy.counters())
                n = ++counters[index_of(r.category)];
            replacement[k] = placeholder_text(r.category, n);
        }
    }

    result.text = text;
    for (std::size_t k = regions.size(); k-- > 0;)
        result.text.replace(regions[k].start, regions[k].end - regions[k].start, replacement[k]);

    std::size_t orig = 0;
    std::size_t out = 0;
    for (std::size_t k = 0; k < regions.size(); ++k) {
        const auto& r = regions[k];
        if (r.start > orig) {
            result.offset_map.push_back({orig, r.start, out, out + (r.start - orig), false, false, std::nullopt});
            out += r.start - orig;
        }
        const auto len = replacement[k].size();
        result.offset_map.push_back({r.start, r.end, out, out + len, true, r.action == Action::Suppress, r.category});
        out += len;
        orig = r.end;
    }
    if (orig < text.size())
        result.offset_map.push_back({orig, text.size(), out, out + (text.size() - orig), false, false, std::nullopt});
    return result;
}

struct RedactionViolation {
    std::size_t start = 0;
    std::size_t end = 0;
    Category category = Category::Other;
    std::string snippet;
    std::string reason;
};

struct VerificationResult {
    bool ok = true;
    std::vector<RedactionViolation> violations;
};

namespace detail {

// Suppressed regions map to nothing; placeholder regions to `[CAT]` or
// `[CAT-n]` for the region's label. Such text is generated, not copied.
inline bool is_policy_replacement(std::u32string_view replaced, const OffsetMapping& m, const RedactionPolicy& policy)
{
    if (!m.category)
        return false;
    const auto action = policy.action(*m.category);
    if (action == Action::Suppress)
        return replaced.empty() && m.removed;
    if (action != Action::Placeholder)
        return false;
    const auto bare = placeholder_text(*m.category);
    if (replaced == bare)
        return true;
    const auto prefix = std::u32string_view(bare).substr(0, bare.size() - 1);
    if (replaced.size() < prefix.size() + 3 || replaced.substr(0, prefix.size()) != prefix ||
        replaced[prefix.size()] != U'-' || replaced.back() != U']')
        return false;
    const auto digits = replaced.substr(prefix.size() + 1, replaced.size() - prefix.size() - 2);
    return std::all_of(digits.begin(), digits.end(), [](char32_t c) { return c >= U'0' && c <= U'9'; });
}

} // namespace detail

/// Post-hoc check of a redaction. For every actionable span no original
/// character may have been copied through, and the text its region maps to
/// must be the policy's own replacement (empty or a placeholder), never
/// anything containing the snippet. In strict mode the snippet must
/// also not occur anywhere in the output (literal, case-sensitive; noisy for
/// short spans). The offset map itself is checked for monotonicity and
/// fidelity of the surviving text.
inline VerificationResult verify_redaction(const RedactionResult& result, std::span<const SpanAnnotation> spans,
                                           const Document& doc, const RedactionPolicy& policy, bool strict = false)
{
    VerificationResult v;
    auto violate = [&](const SpanAnnotation* s, std::string reason) {
        v.ok = false;
        RedactionViolation rv;
        if (s) {
            rv.start = s->start;
            rv.end = s->end;
            rv.category = s->category;
            rv.snippet = doc.slice(s->start, s->end);
        }
        rv.reason = std::move(reason);
        v.violations.push_back(std::move(rv));
    };

    std::size_t orig = 0, out = 0;
    for (const auto& m : result.offset_map) {
        if (m.orig_start != orig || m.out_start != out || m.orig_end < m.orig_start || m.out_end < m.out_start) {
            violate(nullptr, "offset map is not contiguous and monotone");
            return v;
        }
        if (!m.redacted) {
            if (m.orig_end - m.orig_start != m.out_end - m.out_start || m.out_end > result.text.size() ||
                std::u32string_view(result.text).substr(m.out_start, m.out_end - m.out_start) !=
                    doc.view(m.orig_start, m.orig_end)) {
                violate(nullptr, "surviving interval does not reproduce the source text");
                return v;
            }
        }
        orig = m.orig_end;
        out = m.out_end;
    }
    if (orig != doc.size() || out != result.text.size()) {
        violate(nullptr, "offset map does not cover the document and output");
        return v;
    }

    const std::u32string_view output(result.text);
    for (const auto& s : spans) {
        if (policy.action(s.category) == Action::Keep)
            continue;
        const auto snippet = doc.view(s.start, s.end);
        bool leaked = false;
        for (const auto& m : result.offset_map) {
            if (std::max(m.orig_start, s.start) >= std::min(m.orig_end, s.end))
                continue;
            if (!m.redacted) {
                violate(&s, "source characters copied to output");
                leaked = true;
                break;
            }
            const auto replaced = output.substr(m.out_start, m.out_end - m.out_start);
            if (detail::is_policy_replacement(replaced, m, policy))
                continue;
            violate(&s, replaced.find(snippet) != std::u32string_view::npos ? "snippet reproduced at mapped location"
                                                                            : "replacement is not a policy placeholder");
            leaked = true;
            break;
        }
        if (!leaked && strict && output.find(snippet) != std::u32string_view::npos)
            violate(&s, "snippet occurs in output (strict)");
    }
    return v;
}

} // namespace ipi
