// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Rule file format, one rule per line:
//
//   CATEGORY<TAB>KIND<TAB>PATTERN[<TAB>FLAGS]
//
// KIND is `regex` (Perl syntax, matched leftmost-longest) or `gazetteer`
// (a literal phrase matched on word boundaries). FLAGS is a comma list; the
// only flag is `i` (alias `icase`) for case-insensitive matching. Lines
// starting with `#` and blank lines are ignored. All gazetteer phrases of one
// category and case mode form a single phrase-list rule.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <boost/regex.hpp>

#include "ipi/core/category.hpp"
#include "ipi/core/error.hpp"
#include "ipi/core/model.hpp"
#include "ipi/core/unicode.hpp"

namespace ipi {

enum class PatternKind { Regex, Gazetteer };

struct Rule {
    Category category = Category::Other;
    PatternKind kind = PatternKind::Regex;
    std::string pattern;
    bool case_insensitive = false;
    std::size_t line = 0;
};

namespace detail {

struct CompiledRegex {
    Category category;
    boost::regex re;
};

struct Gazetteer {
    Category category;
    bool case_insensitive;
    std::vector<std::u32string> phrases; // lowered when case-insensitive, longest first
};

inline std::vector<std::string> split_tabs(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto tab = line.find('\t', pos);
        out.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
        if (tab == std::string::npos)
            break;
        pos = tab + 1;
    }
    return out;
}

} // namespace detail

/// Validated, compiled rules. Immutable once loaded and safe to share.
class RuleSet {
public:
    RuleSet() = default;

    RuleSet(std::string name, std::vector<Rule> rules) : name_(std::move(name)), rules_(std::move(rules)) { compile(); }

    static RuleSet parse(std::istream& in, std::string name, const std::string& origin = "<rules>")
    {
        std::vector<Rule> rules;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty() || line.front() == '#' || line.find_first_not_of(" \t") == std::string::npos)
                continue;
            const auto fields = detail::split_tabs(line);
            auto fail = [&](const std::string& msg) { throw DataError(origin + ":" + std::to_string(line_no) + ": " + msg); };
            if (fields.size() < 3 || fields.size() > 4)
                fail("expected CATEGORY<TAB>KIND<TAB>PATTERN[<TAB>FLAGS], got " + std::to_string(fields.size()) +
                     " field(s)");
            Rule r;
            r.line = line_no;
            auto cat = try_parse_category(fields[0]);
            if (!cat)
                fail("unknown category '" + fields[0] + "'");
            r.category = *cat;
            if (fields[1] == "regex")
                r.kind = PatternKind::Regex;
            else if (fields[1] == "gazetteer")
                r.kind = PatternKind::Gazetteer;
            else
                fail("unknown pattern kind '" + fields[1] + "' (expected regex or gazetteer)");
            r.pattern = fields[2];
            if (r.pattern.empty())
                fail("empty pattern");
            if (fields.size() == 4) {
                std::stringstream flags(fields[3]);
                std::string flag;
                while (std::getline(flags, flag, ',')) {
                    if (flag == "i" || flag == "icase")
                        r.case_insensitive = true;
                    else if (!flag.empty())
                        fail("unknown flag '" + flag + "'");
                }
            }
            rules.push_back(std::move(r));
        }
        try {
            return RuleSet(std::move(name), std::move(rules));
        } catch (const DataError& e) {
            throw DataError(origin + ":" + e.what());
        }
    }

    static RuleSet parse(std::string_view text, std::string name)
    {
        std::istringstream in{std::string(text)};
        return parse(in, std::move(name));
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<Rule>& rules() const noexcept { return rules_; }

    /// All non-overlapping leftmost-longest matches of every rule. Overlaps
    /// between different rules are kept. Output is sorted and free of exact
    /// duplicates, so it does not depend on rule order.
    std::vector<SpanAnnotation> tag(const Document& doc) const
    {
        std::vector<SpanAnnotation> out;
        const auto& text = doc.text();
        if (text.empty())
            return out;

        if (!regexes_.empty()) {
            const std::string utf8 = doc.utf8();
            const auto offsets = unicode::utf8_byte_offsets(text);
            auto to_cp_floor = [&](std::size_t byte) {
                return static_cast<std::size_t>(std::upper_bound(offsets.begin(), offsets.end(), byte) - offsets.begin()) - 1;
            };
            auto to_cp_ceil = [&](std::size_t byte) {
                return static_cast<std::size_t>(std::lower_bound(offsets.begin(), offsets.end(), byte) - offsets.begin());
            };
            for (const auto& rx : regexes_) {
                boost::sregex_iterator it(utf8.begin(), utf8.end(), rx.re, boost::match_posix | boost::match_not_null);
                for (boost::sregex_iterator end; it != end; ++it) {
                    const auto b0 = static_cast<std::size_t>(it->position(std::size_t{0}));
                    const auto b1 = b0 + static_cast<std::size_t>(it->length(std::size_t{0}));
                    const auto start = to_cp_floor(b0);
                    const auto stop = to_cp_ceil(b1);
                    if (start < stop)
                        out.push_back(make_span(doc, start, stop, rx.category, name_));
                }
            }
        }

        for (const auto& gz : gazetteers_)
            match_gazetteer(doc, gz, out);

        sort_spans(out);
        out.erase(std::unique(out.begin(), out.end(),
                              [](const SpanAnnotation& a, const SpanAnnotation& b) {
                                  return a.start == b.start && a.end == b.end && a.category == b.category;
                              }),
                  out.end());
        return out;
    }

private:
    void compile()
    {
        std::map<std::pair<Category, bool>, std::vector<std::u32string>> phrases;
        for (const auto& r : rules_) {
            if (r.kind == PatternKind::Regex) {
                boost::regex::flag_type flags = boost::regex::perl;
                if (r.case_insensitive)
                    flags |= boost::regex::icase;
                try {
                    regexes_.push_back(detail::CompiledRegex{r.category, boost::regex(r.pattern, flags)});
                } catch (const boost::regex_error& e) {
                    throw DataError(std::to_string(r.line) + ": invalid regex at position " +
                                    std::to_string(e.position()) + ": " + e.what());
                }
            } else {
                std::u32string phrase;
                try {
                    phrase = unicode::decode_utf8(r.pattern);
                } catch (const DataError& e) {
                    throw DataError(std::to_string(r.line) + ": " + e.what());
                }
                if (r.case_insensitive)
                    phrase = unicode::to_lower(phrase);
                phrases[{r.category, r.case_insensitive}].push_back(std::move(phrase));
            }
        }
        for (auto& [key, list] : phrases) {
            std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
                return a.size() != b.size() ? a.size() > b.size() : a < b;
            });
            list.erase(std::unique(list.begin(), list.end()), list.end());
            gazetteers_.push_back(detail::Gazetteer{key.first, key.second, std::move(list)});
        }
    }

    void match_gazetteer(const Document& doc, const detail::Gazetteer& gz, std::vector<SpanAnnotation>& out) const
    {
        const std::u32string lowered = gz.case_insensitive ? unicode::to_lower(doc.text()) : std::u32string();
        const std::u32string_view text = gz.case_insensitive ? std::u32string_view(lowered) : std::u32string_view(doc.text());
        std::size_t i = 0;
        while (i < text.size()) {
            const bool at_boundary = i == 0 || !unicode::is_word(text[i - 1]);
            std::size_t best = 0;
            for (const auto& phrase : gz.phrases) {
                if (phrase.size() > text.size() - i || text.compare(i, phrase.size(), phrase) != 0)
                    continue;
                if (unicode::is_word(phrase.front()) && !at_boundary)
                    continue;
                const std::size_t end = i + phrase.size();
                if (unicode::is_word(phrase.back()) && end < text.size() && unicode::is_word(text[end]))
                    continue;
                best = phrase.size(); // phrases are longest first
                break;
            }
            if (best) {
                out.push_back(make_span(doc, i, i + best, gz.category, name_));
                i += best;
            } else {
                ++i;
            }
        }
    }

    std::string name_;
    std::vector<Rule> rules_;
    std::vector<detail::CompiledRegex> regexes_;
    std::vector<detail::Gazetteer> gazetteers_;
};

inline std::vector<SpanAnnotation> rule_tag(const Document& doc, const RuleSet& rules)
{
    return rules.tag(doc);
}

} // namespace ipi
