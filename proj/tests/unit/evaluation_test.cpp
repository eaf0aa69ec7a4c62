// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace ipi {
namespace {

using testing::doc;
using testing::correct_count;
using testing::span;

TEST(Metrics, SyntheticCountsReproduceF1)
{
    // P = 7254/9300 = 0.78, R = 7254/7800 = 0.93
    GoldSideCounts g{7254, 0, 0, 546};
    PredSideCounts p{7254, 0, 0, 2046};
    const auto s = score(g, p, Schema::Type);
    EXPECT_DOUBLE_EQ(s.precision, 0.78);
    EXPECT_DOUBLE_EQ(s.recall, 0.93);
    EXPECT_NEAR(s.f1, 2 * 0.78 * 0.93 / (0.78 + 0.93), 1e-12);
    EXPECT_NEAR(s.f1, 0.85, 0.005);
    EXPECT_NEAR(f1_from_pr(0.84, 0.97), 0.90, 0.005);
    EXPECT_EQ(f1_from_pr(0.0, 0.0), 0.0);
}

TEST(Metrics, PartialWeighsHalf)
{
    GoldSideCounts g{2, 0, 2, 0};
    PredSideCounts p{2, 0, 2, 4};
    const auto s = score(g, p, Schema::Partial);
    EXPECT_DOUBLE_EQ(s.recall, 3.0 / 4.0);
    EXPECT_DOUBLE_EQ(s.precision, 3.0 / 8.0);
    EXPECT_DOUBLE_EQ(score(g, p, Schema::Exact).recall, 0.5);
}

TEST(ClassifyPair, SchemaTable)
{
    const auto d = doc("d", "Her daughter called");
    const auto gold = span(d, "Her daughter", Category::Family);
    const auto inner = span(d, "daughter", Category::Family);
    const auto inner_sec = span(d, "daughter", Category::Sec);
    const auto same_sec = span(d, "Her daughter", Category::Sec);
    const auto apart = span(d, "called", Category::Family);

    EXPECT_EQ(classify_pair(gold, gold, Schema::Strict), Outcome::Correct);
    EXPECT_EQ(classify_pair(gold, inner, Schema::Strict), Outcome::Incorrect);
    EXPECT_EQ(classify_pair(gold, inner, Schema::Exact), Outcome::Incorrect);
    EXPECT_EQ(classify_pair(gold, inner, Schema::Partial), Outcome::Partial);
    EXPECT_EQ(classify_pair(gold, inner, Schema::Type), Outcome::Correct);
    EXPECT_EQ(classify_pair(gold, inner_sec, Schema::Type), Outcome::Incorrect);
    EXPECT_EQ(classify_pair(gold, same_sec, Schema::Exact), Outcome::Correct);
    EXPECT_EQ(classify_pair(gold, same_sec, Schema::Partial), Outcome::Correct);
    EXPECT_EQ(classify_pair(gold, same_sec, Schema::Strict), Outcome::Incorrect);
    for (auto s : kAllSchemas)
        EXPECT_FALSE(classify_pair(gold, apart, s));

    auto other_doc = gold;
    other_doc.doc_id = "x";
    EXPECT_THROW(classify_pair(gold, other_doc, Schema::Type), UsageError);
}

TEST(Align, DocumentOrderGreedyWouldLoseAPair)
{
    // gold g1 = [0,10) overlaps p1 = [2,4) and p2 = [8,12); gold g2 = [3,5)
    // overlaps only p1. Taking p1 for g1 would strand g2.
    const auto d = doc("d", "abcdefghijklmnop");
    std::vector<SpanAnnotation> gold = {make_span(d, 0, 10, Category::Family), make_span(d, 3, 5, Category::Family)};
    std::vector<SpanAnnotation> pred = {make_span(d, 2, 4, Category::Family), make_span(d, 8, 12, Category::Family)};
    const auto ps = align(gold, pred, Schema::Type);
    EXPECT_EQ(correct_count(ps), 2u);
    EXPECT_EQ(testing::oracle_max_correct(gold, pred, Schema::Type), 2u);
}

TEST(Align, LeftoversAreMissedAndSpurious)
{
    const auto d = doc("d", "aa bb cc dd");
    std::vector<SpanAnnotation> gold = {span(d, "aa", Category::Sec), span(d, "cc", Category::Body)};
    std::vector<SpanAnnotation> pred = {span(d, "aa", Category::Family), span(d, "dd", Category::Body)};
    const auto ps = align(gold, pred, Schema::Type);
    ASSERT_EQ(ps.size(), 3u);
    EXPECT_EQ(ps[0].outcome, Outcome::Incorrect);
    EXPECT_EQ(ps[1].outcome, Outcome::Missed);
    EXPECT_EQ(ps[2].outcome, Outcome::Spurious);
}

std::vector<SpanAnnotation> narrow_random_spans(const Document& d, std::mt19937_64& rng, std::size_t max_spans)
{
    // few labels and short documents so that many pairs compete
    static const Category cats[] = {Category::Family, Category::Sec, Category::RelTime};
    std::vector<SpanAnnotation> out;
    std::uniform_int_distribution<std::size_t> count(0, max_spans), pos(0, d.size() - 1), len(1, 10), cat(0, 2);
    for (auto k = count(rng); k > 0; --k) {
        const auto a = pos(rng);
        const auto b = std::min(d.size(), a + len(rng));
        out.push_back(make_span(d, a, b, cats[cat(rng)]));
    }
    return out;
}

// Exhaustive oracle over raw (unmerged) spans: overlapping, nested and
// duplicated spans of every label, in both overlap modes.
TEST(Align, GreedyCorrectCountEqualsBruteForce)
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 3000; ++trial) {
        const auto d = doc("d", testing::random_text(rng, 1));
        const auto tokens = tokenize(d);
        const auto gold = narrow_random_spans(d, rng, 8);
        const auto pred = narrow_random_spans(d, rng, 8);
        for (auto schema : kAllSchemas)
            for (bool token_mode : {false, true}) {
                const OverlapTest ov = token_mode ? OverlapTest(tokens) : OverlapTest();
                const auto ps = align(gold, pred, schema, ov);
                ASSERT_EQ(correct_count(ps), testing::oracle_max_correct(gold, pred, schema, ov))
                    << "trial " << trial << " schema " << to_string(schema) << " token " << token_mode;
                // every span appears exactly once
                std::vector<int> gseen(gold.size()), pseen(pred.size());
                for (const auto& p : ps) {
                    if (p.gold)
                        ++gseen[*p.gold];
                    if (p.pred)
                        ++pseen[*p.pred];
                }
                for (int v : gseen)
                    ASSERT_EQ(v, 1);
                for (int v : pseen)
                    ASSERT_EQ(v, 1);
            }
    }
}

TEST(Evaluate, CountConservationAndSchemaDominance)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        Corpus c;
        std::vector<SpanAnnotation> g, p;
        for (int k = 0; k < 4; ++k) {
            const auto d = doc("d" + std::to_string(k), testing::random_text(rng, 2));
            c.add(d);
            for (auto& s : testing::random_char_spans(d, rng, 6))
                g.push_back(s);
            for (auto& s : testing::random_char_spans(d, rng, 6))
                p.push_back(s);
        }
        const auto gold = AnnotationSet::from_spans("gold", g);
        const auto pred = AnnotationSet::from_spans("pred", p);
        std::map<Schema, EvalReport> reports;
        for (auto schema : kAllSchemas) {
            const auto r = evaluate(gold, pred, schema, &c);
            EXPECT_EQ(r.gold_total.total(), gold.size());
            EXPECT_EQ(r.pred_total.total(), pred.size());
            for (auto cat : kAllCategories) {
                std::size_t gn = 0, pn = 0;
                for (const auto& s : gold.all())
                    gn += s.category == cat;
                for (const auto& s : pred.all())
                    pn += s.category == cat;
                EXPECT_EQ(r.per_category[index_of(cat)].gold.total(), gn);
                EXPECT_EQ(r.per_category[index_of(cat)].pred.total(), pn);
            }
            // matched totals agree on both sides
            EXPECT_EQ(r.gold_total.correct, r.pred_total.correct);
            EXPECT_EQ(r.gold_total.incorrect + r.gold_total.partial, r.pred_total.incorrect + r.pred_total.partial);
            reports.emplace(schema, r);
        }
        const auto& strict = reports.at(Schema::Strict);
        EXPECT_LE(strict.gold_total.correct, reports.at(Schema::Exact).gold_total.correct);
        EXPECT_LE(strict.gold_total.correct, reports.at(Schema::Type).gold_total.correct);
        EXPECT_EQ(reports.at(Schema::Exact).gold_total.correct, reports.at(Schema::Partial).gold_total.correct);
        EXPECT_LE(strict.micro.f1, reports.at(Schema::Type).micro.f1 + 1e-12);
        EXPECT_LE(strict.micro.f1, reports.at(Schema::Partial).micro.f1 + 1e-12);
    }
}

TEST(Evaluate, PerfectPredictionsScoreOne)
{
    Corpus c;
    const auto d = doc("d", "Her daughter, a carpenter, visited the ICU.");
    c.add(d);
    const auto gold = AnnotationSet::from_spans(
        "g", std::vector{span(d, "Her daughter", Category::Family), span(d, "carpenter", Category::Sec),
                         span(d, "ICU", Category::Facility)});
    for (auto schema : kAllSchemas) {
        const auto r = evaluate(gold, gold, schema, &c);
        EXPECT_EQ(r.micro.f1, 1.0);
        EXPECT_EQ(r.macro.f1, 1.0);
        EXPECT_EQ(r.macro_categories, 3u);
    }
}

TEST(Evaluate, WorkedBoundaryMismatch)
{
    Corpus c;
    const auto d = doc("d", "Her daughter called twice.");
    c.add(d);
    const auto gold = AnnotationSet::from_spans("g", std::vector{span(d, "Her daughter", Category::Family)});
    const auto pred = AnnotationSet::from_spans(
        "p", std::vector{span(d, "daughter", Category::Family), span(d, "twice", Category::RelTime)});
    EXPECT_DOUBLE_EQ(evaluate(gold, pred, Schema::Type).micro.recall, 1.0);
    EXPECT_DOUBLE_EQ(evaluate(gold, pred, Schema::Type).micro.precision, 0.5);
    EXPECT_DOUBLE_EQ(evaluate(gold, pred, Schema::Strict).micro.recall, 0.0);
    EXPECT_DOUBLE_EQ(evaluate(gold, pred, Schema::Partial).micro.recall, 0.5);
    EXPECT_DOUBLE_EQ(evaluate(gold, pred, Schema::Partial).micro.precision, 0.25);
    const auto r = evaluate(gold, pred, Schema::Type);
    EXPECT_EQ(r.per_category[index_of(Category::RelTime)].pred.spurious, 1u);
    EXPECT_EQ(r.macro_categories, 2u); // FAMILY and RELTIME
}

TEST(Evaluate, CrossCategoryPairingKeepsPerCategoryCounts)
{
    Corpus c;
    const auto d = doc("d", "works as a carpenter");
    c.add(d);
    const auto gold = AnnotationSet::from_spans("g", std::vector{span(d, "carpenter", Category::Sec)});
    const auto pred = AnnotationSet::from_spans("p", std::vector{span(d, "carpenter", Category::Lifestyle)});
    const auto r = evaluate(gold, pred, Schema::Type, &c);
    const auto& sec = r.per_category[index_of(Category::Sec)];
    const auto& life = r.per_category[index_of(Category::Lifestyle)];
    EXPECT_EQ(sec.gold.incorrect, 1u);
    EXPECT_EQ(sec.pred.total(), 0u);
    EXPECT_EQ(life.pred.incorrect, 1u);
    EXPECT_EQ(life.gold.total(), 0u);
    EXPECT_EQ(r.micro.f1, 0.0);
}

TEST(Evaluate, UnknownDocumentsAndTokenModeRequirements)
{
    Corpus c;
    const auto d = doc("d", "abc");
    c.add(d);
    AnnotationSet gold("g"), pred("p");
    gold.add(make_span(d, 0, 1, Category::Sec));
    pred.add(SpanAnnotation{"zz", 0, 1, Category::Sec, "a", "p", 0});
    EXPECT_THROW(evaluate(gold, pred, Schema::Type, &c), DataError);
    EXPECT_THROW(evaluate(gold, pred, Schema::Type), DataError);
    EXPECT_THROW(evaluate(gold, gold, Schema::Type, nullptr, OverlapMode::Token), UsageError);
    EXPECT_THROW(parse_schema("loose"), UsageError);
}

TEST(EvaluationReport, JsonHasAllRowsAndAverages)
{
    Corpus c;
    const auto d = doc("d", "Her daughter called.");
    c.add(d);
    const auto gold = AnnotationSet::from_spans("g", std::vector{span(d, "daughter", Category::Family)});
    const auto r = evaluate(gold, gold, Schema::Strict, &c);
    const auto j = to_json(r);
    EXPECT_EQ(j["schema"], "strict");
    EXPECT_EQ(j["categories"].size(), kCategoryCount);
    EXPECT_EQ(j["micro"]["f1"], 1.0);
    EXPECT_EQ(j["support"], 1);
    std::ostringstream os;
    write_table(os, r);
    EXPECT_NE(os.str().find("macro average"), std::string::npos);
    EXPECT_NE(os.str().find("FAMILY"), std::string::npos);
}

} // namespace
} // namespace ipi
