// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>

#include "test_support.hpp"

namespace ipi {
namespace {

using testing::doc;
using testing::span;

TEST(Redaction, PlaceholderAndSuppress)
{
    const auto d = doc("d", "He works as a carpenter.");
    const std::vector<SpanAnnotation> spans = {span(d, "works as a carpenter", Category::Sec)};
    const auto ph = redact(d, spans, RedactionPolicy::uniform(Action::Placeholder));
    EXPECT_EQ(ph.utf8(), "He [SEC].");
    EXPECT_EQ(ph.replacements[index_of(Category::Sec)], 1u);
    const auto sup = redact(d, spans, RedactionPolicy::uniform(Action::Suppress));
    EXPECT_EQ(sup.utf8(), "He .");
    ASSERT_EQ(sup.offset_map.size(), 3u);
    EXPECT_TRUE(sup.offset_map[1].removed);
    EXPECT_EQ(sup.offset_map[1].out_start, sup.offset_map[1].out_end);
    EXPECT_TRUE(verify_redaction(ph, spans, d, RedactionPolicy::uniform(Action::Placeholder), true).ok);
}

TEST(Redaction, KeepOnlyIsIdentity)
{
    std::mt19937_64 rng(53);
    for (int i = 0; i < 200; ++i) {
        const auto d = doc("d", testing::random_text(rng, 3));
        const auto spans = testing::random_char_spans(d, rng, 8);
        const auto r = redact(d, spans, RedactionPolicy::uniform(Action::Keep));
        ASSERT_EQ(r.utf8(), d.utf8());
        ASSERT_LE(r.offset_map.size(), 1u);
    }
}

TEST(Redaction, CountersNumberRegionsPerCategory)
{
    const auto d = doc("d", "ICU then CCU then ward 4 then PACU");
    const std::vector<SpanAnnotation> spans = {span(d, "ICU", Category::Facility), span(d, "CCU", Category::Facility),
                                               span(d, "4", Category::RelTime), span(d, "PACU", Category::Facility)};
    auto policy = RedactionPolicy(Action::Placeholder).with_counters();
    EXPECT_EQ(redact(d, spans, policy).utf8(), "[FACILITY-1] then [FACILITY-2] then ward [RELTIME-1] then [FACILITY-3]");
}

TEST(Redaction, PolicyFingerprintIsStableAndSensitive)
{
    const RedactionPolicy a;
    EXPECT_EQ(a.fingerprint(), RedactionPolicy().fingerprint());
    EXPECT_EQ(a.fingerprint().size(), 16u);
    EXPECT_NE(a.fingerprint(), RedactionPolicy().set(Category::RelTime, Action::Keep).fingerprint());
    EXPECT_NE(a.fingerprint(), RedactionPolicy().with_counters().fingerprint());
    // FNV-1a 64 of the canonical string, computed independently
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : a.canonical())
        h = (h ^ c) * 1099511628211ULL;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    EXPECT_EQ(a.fingerprint(), buf);
}

TEST(Redaction, OutOfBoundsIsDataError)
{
    const auto d = doc("d", "abc");
    EXPECT_THROW(redact(d, std::vector{SpanAnnotation{"d", 1, 9, Category::Sec, "", "", 0}}, RedactionPolicy()),
                 DataError);
    EXPECT_THROW(redact(d, std::vector{SpanAnnotation{"x", 0, 1, Category::Sec, "", "", 0}}, RedactionPolicy()),
                 DataError);
}

// Oracle: connected components of the share-a-character graph over the
// actionable spans; each component becomes one region labelled by its
// highest-priority category and replaced according to that category.
std::u32string oracle_redact(const Document& d, const std::vector<SpanAnnotation>& spans, const RedactionPolicy& p)
{
    std::vector<SpanAnnotation> act;
    for (const auto& s : spans)
        if (p.action(s.category) != Action::Keep)
            act.push_back(s);
    std::vector<std::size_t> parent(act.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i < act.size(); ++i)
        for (std::size_t j = 0; j < act.size(); ++j)
            if (std::max(act[i].start, act[j].start) < std::min(act[i].end, act[j].end))
                parent[find(i)] = find(j);
    struct Comp {
        std::size_t start = SIZE_MAX, end = 0;
        Category cat = Category::Other;
        bool any = false;
    };
    std::map<std::size_t, Comp> comps;
    for (std::size_t i = 0; i < act.size(); ++i) {
        auto& c = comps[find(i)];
        c.start = std::min(c.start, act[i].start);
        c.end = std::max(c.end, act[i].end);
        if (!c.any || priority_rank(act[i].category) < priority_rank(c.cat))
            c.cat = act[i].category;
        c.any = true;
    }
    std::vector<Comp> ordered;
    for (auto& [_, c] : comps)
        ordered.push_back(c);
    std::sort(ordered.begin(), ordered.end(), [](const Comp& a, const Comp& b) { return a.start < b.start; });
    std::u32string out;
    std::size_t pos = 0;
    std::map<Category, int> counter;
    for (const auto& c : ordered) {
        out += d.text().substr(pos, c.start - pos);
        if (p.action(c.cat) == Action::Placeholder) {
            std::string ph = "[" + std::string(to_string(c.cat));
            if (p.counters())
                ph += "-" + std::to_string(++counter[c.cat]);
            out += unicode::decode_utf8(ph + "]");
        }
        pos = c.end;
    }
    out += d.text().substr(pos);
    return out;
}

TEST(Redaction, AllTwoSpanTopologies)
{
    const auto d = doc("d", "abcdefg");
    const Category cats[] = {Category::Family, Category::PhiRef, Category::RelTime};
    for (std::size_t a0 = 0; a0 < 7; ++a0)
        for (std::size_t a1 = a0 + 1; a1 <= 7; ++a1)
            for (std::size_t b0 = 0; b0 < 7; ++b0)
                for (std::size_t b1 = b0 + 1; b1 <= 7; ++b1)
                    for (auto ca : cats)
                        for (auto cb : cats)
                            for (auto act : {Action::Placeholder, Action::Suppress}) {
                                auto policy = RedactionPolicy(act).set(Category::RelTime, Action::Keep);
                                const std::vector<SpanAnnotation> spans = {make_span(d, a0, a1, ca),
                                                                           make_span(d, b0, b1, cb)};
                                const auto r = redact(d, spans, policy);
                                ASSERT_EQ(r.text, oracle_redact(d, spans, policy));
                                ASSERT_TRUE(verify_redaction(r, spans, d, policy).ok);
                            }
}

TEST(Redaction, RandomTriplesVerifyAndMatchOracle)
{
    std::mt19937_64 rng(59);
    const Action actions[] = {Action::Suppress, Action::Placeholder, Action::Keep};
    std::uniform_int_distribution<int> pick(0, 2);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto d = doc("d", testing::random_text(rng, 3));
        const auto spans = testing::random_char_spans(d, rng, 10);
        RedactionPolicy policy(actions[pick(rng)]);
        for (auto c : kAllCategories)
            if (coin(rng))
                policy.set(c, actions[pick(rng)]);
        policy.with_counters(coin(rng));
        const auto r = redact(d, spans, policy);
        const auto v = verify_redaction(r, spans, d, policy);
        ASSERT_TRUE(v.ok) << trial << ": " << (v.violations.empty() ? "" : v.violations[0].reason);
        ASSERT_EQ(r.text, oracle_redact(d, spans, policy));

        // length accounting
        std::size_t removed = 0, inserted = 0;
        for (const auto& m : r.offset_map)
            if (m.redacted) {
                removed += m.orig_end - m.orig_start;
                inserted += m.out_end - m.out_start;
            }
        ASSERT_EQ(r.text.size(), d.size() - removed + inserted);

        // idempotence: re-redacting the output with the remapped spans
        const auto again_doc = Document("d", r.text);
        std::vector<SpanAnnotation> remapped;
        for (const auto& m : r.offset_map)
            if (m.redacted && m.out_end > m.out_start)
                remapped.push_back(make_span(again_doc, m.out_start, m.out_end, *m.category));
        ASSERT_EQ(redact(again_doc, remapped, policy).text, r.text);
    }
}

TEST(Verify, DetectsTamperedOutput)
{
    const auto d = doc("d", "Seen in the ICU; ICU again.");
    const std::vector<SpanAnnotation> spans = {span(d, "ICU", Category::Facility)};
    const RedactionPolicy policy;
    auto r = redact(d, spans, policy);
    EXPECT_TRUE(verify_redaction(r, spans, d, policy).ok);
    EXPECT_TRUE(verify_redaction(r, {}, d, policy).ok);

    // strict mode flags the second, unannotated occurrence
    const auto strict = verify_redaction(r, spans, d, policy, true);
    ASSERT_FALSE(strict.ok);
    EXPECT_EQ(strict.violations[0].snippet, "ICU");

    // a map claiming a redacted span survived
    auto leaky = redact(d, spans, RedactionPolicy::uniform(Action::Keep));
    EXPECT_FALSE(verify_redaction(leaky, spans, d, policy).ok);

    // surviving text that does not reproduce the source
    auto edited = r;
    edited.text[0] = U'X';
    EXPECT_FALSE(verify_redaction(edited, spans, d, policy).ok);

    // a placeholder that echoes the snippet
    auto echo = r;
    const auto& m = echo.offset_map[1];
    echo.text.replace(m.out_start, m.out_end - m.out_start, U"[ICU]");
    echo.offset_map[1].out_end = echo.offset_map[1].out_start + 5;
    std::size_t out = echo.offset_map[1].out_end;
    for (std::size_t k = 2; k < echo.offset_map.size(); ++k) {
        const auto len = echo.offset_map[k].out_end - echo.offset_map[k].out_start;
        echo.offset_map[k].out_start = out;
        echo.offset_map[k].out_end = out + len;
        out += len;
    }
    const auto v = verify_redaction(echo, spans, d, policy);
    ASSERT_FALSE(v.ok);
    EXPECT_EQ(v.violations[0].reason, "snippet reproduced at mapped location");
}

TEST(PolicyIo, ParsesActionsAndAudit)
{
    const auto p = policy_from_json(nlohmann::json::parse(
        R"({"default":"SUPPRESS","actions":{"RELTIME":"KEEP","SEC":"PLACEHOLDER"},"counters":true})"));
    EXPECT_EQ(p.action(Category::Family), Action::Suppress);
    EXPECT_EQ(p.action(Category::RelTime), Action::Keep);
    EXPECT_EQ(p.action(Category::Sec), Action::Placeholder);
    EXPECT_TRUE(p.counters());
    EXPECT_THROW(policy_from_json(nlohmann::json::parse(R"({"default":"BLUR"})")), DataError);
    EXPECT_THROW(policy_from_json(nlohmann::json::parse(R"({"actions":{"AGE":"KEEP"}})")), DataError);
    EXPECT_THROW(policy_from_json(nlohmann::json::parse("[]")), DataError);

    const auto d = doc("d", "He works as a carpenter.");
    const std::vector<SpanAnnotation> spans = {span(d, "works as a carpenter", Category::Sec)};
    const auto r = redact(d, spans, p);
    const auto audit = audit_json(r, verify_redaction(r, spans, d, p));
    EXPECT_EQ(audit["verified"], true);
    EXPECT_EQ(audit["replacements"]["SEC"], 1);
    EXPECT_EQ(audit["offset_map"].size(), 3u);
    EXPECT_EQ(audit["offset_map"][1]["label"], "SEC");
}

} // namespace
} // namespace ipi
