// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Machine-readable output goes to stdout,
// diagnostics to stderr; any error exits nonzero.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ipi/ipi.hpp"
#include "ipi/review/config.hpp"
#include "ipi/review/server.hpp"
#include "ipi/review/store.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitData = 1;
constexpr int kExitVerify = 3;

ipi::AnnotationSet load_set(const std::string& path, const ipi::Corpus* corpus = nullptr)
{
    auto spans = ipi::read_annotations(fs::path(path), corpus);
    return ipi::AnnotationSet::from_spans(fs::path(path).stem().string(), spans);
}

ipi::OverlapMode parse_mode(const std::string& s)
{
    return s == "character" ? ipi::OverlapMode::Character : ipi::OverlapMode::Token;
}

std::vector<double> parse_ratios(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ipi::UsageError("--ratios: '" + item + "' is not a number");
        }
    }
    if (out.size() != 3)
        throw ipi::UsageError("--ratios expects three comma-separated values: train,dev,test");
    return out;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path);
    if (!out)
        throw ipi::DataError(path + ": cannot open for writing");
    out << content;
}

int cmd_stats(const std::string& ann_path, bool as_json)
{
    const auto set = load_set(ann_path);
    const auto stats = ipi::corpus_stats(set);
    if (as_json) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::object();
        for (auto c : ipi::kAllCategories)
            rows[std::string(ipi::to_string(c))] = {{"count", stats.counts[ipi::index_of(c)]},
                                                    {"proportion", stats.proportions[ipi::index_of(c)]}};
        nlohmann::ordered_json out{{"categories", rows}, {"total", stats.total}};
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    std::printf("%-10s %7s %8s\n", "label", "count", "share");
    for (auto c : ipi::kAllCategories) {
        const auto i = ipi::index_of(c);
        std::printf("%-10s %7zu %7.2f%%\n", std::string(ipi::to_string(c)).c_str(), stats.counts[i],
                    100.0 * stats.proportions[i]);
    }
    std::printf("%-10s %7zu %7.2f%%\n", "TOTAL", stats.total, stats.total ? 100.0 : 0.0);
    if (stats.proportions_undefined)
        std::cerr << "warning: no annotations; proportions are undefined and reported as 0\n";
    return 0;
}

int cmd_split(const std::string& docs_path, const std::string& ratios_text, std::uint64_t seed)
{
    const auto r = parse_ratios(ratios_text);
    const auto corpus = ipi::read_documents(fs::path(docs_path));
    const auto split = ipi::split_corpus(corpus.ids(), ipi::SplitRatios{r[0], r[1], r[2]}, seed);
    nlohmann::ordered_json out;
    out["seed"] = split.seed;
    out["ratios"] = {split.ratios.train, split.ratios.dev, split.ratios.test};
    out["train"] = split.train;
    out["dev"] = split.dev;
    out["test"] = split.test;
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_bio(const std::string& docs_path, const std::string& ann_path, std::size_t max_tokens)
{
    const auto corpus = ipi::read_documents(fs::path(docs_path));
    const auto set = load_set(ann_path, &corpus);
    for (const auto& [id, doc] : corpus) {
        const auto tokens = ipi::tokenize(doc);
        const auto& spans = set.spans(id);
        const auto sections = ipi::section_document(doc, tokens, max_tokens, spans);
        for (const auto& section : sections) {
            const auto sec_tokens = ipi::section_tokens(section, tokens);
            std::vector<ipi::SpanAnnotation> inside;
            for (const auto& s : spans)
                if (s.start >= section.start && s.end <= section.end)
                    inside.push_back(s);
            auto seq = ipi::spans_to_bio(doc, sec_tokens, inside);
            seq.section_index = section.section_index;
            ipi::write_conll(std::cout, seq);
        }
    }
    return 0;
}

int cmd_iaa(const std::string& docs_path, const std::string& a_path, const std::string& b_path,
            const std::string& mode, bool as_json)
{
    const auto corpus = ipi::read_documents(fs::path(docs_path));
    const auto a = load_set(a_path, &corpus);
    const auto b = load_set(b_path, &corpus);
    const auto report = ipi::pairwise_relaxed_f1(a, b, corpus, parse_mode(mode));
    if (as_json)
        std::cout << ipi::to_json(report).dump(2) << '\n';
    else
        ipi::write_table(std::cout, report);
    return 0;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path, const std::string& docs_path,
             const std::string& schema, const std::string& overlap, bool as_json)
{
    const auto mode = parse_mode(overlap);
    std::optional<ipi::Corpus> corpus;
    if (!docs_path.empty())
        corpus = ipi::read_documents(fs::path(docs_path));
    else if (mode == ipi::OverlapMode::Token)
        throw ipi::UsageError("--overlap token requires --docs");
    const ipi::Corpus* cp = corpus ? &*corpus : nullptr;
    const auto gold = load_set(gold_path, cp);
    const auto pred = load_set(pred_path, cp);
    const auto report = ipi::evaluate(gold, pred, ipi::parse_schema(schema), cp, mode);
    if (as_json)
        std::cout << ipi::to_json(report).dump(2) << '\n';
    else
        ipi::write_table(std::cout, report);
    return 0;
}

int cmd_tag(const std::string& docs_path, const std::string& rules_path, const std::string& name)
{
    const auto corpus = ipi::read_documents(fs::path(docs_path));
    ipi::RuleSet rules;
    if (rules_path.empty()) {
        rules = name.empty() ? ipi::default_rules() : ipi::RuleSet::parse(ipi::kDefaultRulesText, name);
    } else {
        std::ifstream in(rules_path);
        if (!in)
            throw ipi::DataError(rules_path + ": cannot open rules file");
        rules = ipi::RuleSet::parse(in, name.empty() ? "rules:" + fs::path(rules_path).stem().string() : name,
                                    rules_path);
    }
    for (const auto& [_, doc] : corpus)
        for (const auto& s : rules.tag(doc))
            std::cout << ipi::to_json(s).dump() << '\n';
    return 0;
}

int cmd_ground(const std::string& docs_path, const std::string& ext_path, int max_edit, const std::string& report_path)
{
    const auto corpus = ipi::read_documents(fs::path(docs_path));
    const auto extractions = ipi::read_extractions(fs::path(ext_path));
    std::optional<std::size_t> budget;
    if (max_edit >= 0)
        budget = static_cast<std::size_t>(max_edit);
    ipi::GroundingReport total;
    nlohmann::ordered_json per_doc = nlohmann::ordered_json::array();
    for (const auto& [id, list] : extractions) {
        const auto* doc = corpus.find(id);
        if (!doc)
            throw ipi::DataError(ext_path + ": unknown doc_id '" + id + "'");
        const auto report = ipi::ground_extractions(*doc, list, budget);
        for (const auto& g : report.grounded)
            std::cout << ipi::to_json(g.span).dump() << '\n';
        per_doc.push_back(ipi::to_json(report));
        total += report;
    }
    std::cerr << "grounded " << total.grounded.size() << " of " << total.total() << " snippet(s); hallucination rate "
              << total.hallucination_rate() << '\n';
    if (!report_path.empty()) {
        nlohmann::ordered_json out;
        out["documents"] = per_doc;
        out["grounded"] = total.grounded.size();
        out["rejected"] = total.rejected.size();
        out["total"] = total.total();
        out["hallucination_rate"] = total.hallucination_rate();
        write_file(report_path, out.dump(2) + "\n");
    }
    return 0;
}

int cmd_redact(const std::string& docs_path, const std::string& gold_path, const std::string& policy_path,
               bool strict, const std::string& audit_path)
{
    const auto corpus = ipi::read_documents(fs::path(docs_path));
    const auto gold = load_set(gold_path, &corpus);
    const auto policy = policy_path.empty() ? ipi::RedactionPolicy{} : ipi::load_policy(policy_path);
    std::ofstream audit;
    if (!audit_path.empty()) {
        audit.open(audit_path);
        if (!audit)
            throw ipi::DataError(audit_path + ": cannot open for writing");
    }
    std::size_t failed = 0;
    for (const auto& [id, doc] : corpus) {
        const auto& spans = gold.spans(id);
        const auto result = ipi::redact(doc, spans, policy);
        const auto check = ipi::verify_redaction(result, spans, doc, policy, strict);
        if (!check.ok) {
            ++failed;
            for (const auto& v : check.violations)
                std::cerr << id << ":" << v.start << "-" << v.end << ": " << v.reason << '\n';
        }
        nlohmann::ordered_json row{{"doc_id", id}, {"text", result.utf8()}, {"policy_fingerprint", result.policy_fingerprint}};
        std::cout << row.dump() << '\n';
        if (audit.is_open())
            audit << ipi::audit_json(result, check).dump() << '\n';
    }
    if (failed) {
        std::cerr << "verification failed for " << failed << " document(s)\n";
        return kExitVerify;
    }
    return 0;
}

ipi::review::ReviewServer* g_server = nullptr;

extern "C" void on_signal(int)
{
    if (g_server)
        g_server->stop();
}

int cmd_serve(const std::string& config_path)
{
    auto cfg = config_path.empty()
                   ? ipi::review::apply_environment(ipi::review::ServiceConfig{}, [](const char* k) { return std::getenv(k); })
                   : ipi::review::load_config(config_path);
    ipi::review::ReviewStore store(cfg.data_dir, cfg.store);
    ipi::review::ReviewServer server(store, cfg);
    const int port = server.bind();
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on " << cfg.host << ":" << port << " (data: " << cfg.data_dir.string() << ")\n";
    std::cout << port << std::endl;
    server.run();
    g_server = nullptr;
    store.snapshot();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Annotation, evaluation and redaction toolkit for indirect identifiers in clinical text"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ipi 0.1.0");

    std::string docs, ann, a, b, gold, pred, rules, name, ext, report, policy, audit, config;
    std::string ratios = "0.6,0.15,0.25", mode = "token", schema = "type", overlap = "character";
    std::uint64_t seed = 13;
    std::size_t max_tokens = 512;
    int max_edit = -1;
    bool as_json = false, strict = false;

    auto* stats = app.add_subcommand("stats", "per-label counts and proportions");
    stats->add_option("annotations", ann, "annotation JSONL")->required();
    stats->add_flag("--json", as_json, "emit JSON");

    auto* split = app.add_subcommand("split", "seeded train/dev/test split manifest");
    split->add_option("docs", docs, "document JSONL")->required();
    split->add_option("--ratios", ratios, "train,dev,test ratios")->capture_default_str();
    split->add_option("--seed", seed, "random seed")->capture_default_str();

    auto* bio = app.add_subcommand("bio", "sectioned BIO export in CoNLL format");
    bio->add_option("docs", docs, "document JSONL")->required();
    bio->add_option("annotations", ann, "annotation JSONL")->required();
    bio->add_option("--max-tokens", max_tokens, "section token budget")->capture_default_str()->check(CLI::PositiveNumber);

    auto* iaa = app.add_subcommand("iaa", "pairwise relaxed-match agreement");
    iaa->add_option("a", a, "annotator A JSONL")->required();
    iaa->add_option("b", b, "annotator B JSONL")->required();
    iaa->add_option("--docs", docs, "document JSONL")->required();
    iaa->add_option("--mode", mode, "overlap granularity")->check(CLI::IsMember({"token", "character"}))->capture_default_str();
    iaa->add_flag("--json", as_json, "emit JSON");

    auto* eval = app.add_subcommand("eval", "score predictions against gold");
    eval->add_option("gold", gold, "gold JSONL")->required();
    eval->add_option("pred", pred, "prediction JSONL")->required();
    eval->add_option("--docs", docs, "document JSONL (validates offsets; required for token overlap)");
    eval->add_option("--schema", schema, "matching schema")
        ->check(CLI::IsMember({"strict", "exact", "partial", "type"}))
        ->capture_default_str();
    eval->add_option("--overlap", overlap, "overlap granularity")
        ->check(CLI::IsMember({"token", "character"}))
        ->capture_default_str();
    eval->add_flag("--json", as_json, "emit JSON");

    auto* tag = app.add_subcommand("tag", "rule-based baseline tagger");
    tag->add_option("docs", docs, "document JSONL")->required();
    tag->add_option("--rules", rules, "rules TSV (default: built-in rules)");
    tag->add_option("--name", name, "source name for emitted spans");

    auto* ground = app.add_subcommand("ground", "align extracted snippets to document offsets");
    ground->add_option("docs", docs, "document JSONL")->required();
    ground->add_option("extractions", ext, "extraction JSONL")->required();
    ground->add_option("--max-edit-distance", max_edit, "fuzzy edit budget (0 disables; default proportional)");
    ground->add_option("--report", report, "write grounding report JSON here");

    auto* redact = app.add_subcommand("redact", "policy-driven redaction with verification");
    redact->add_option("docs", docs, "document JSONL")->required();
    redact->add_option("gold", gold, "annotation JSONL")->required();
    redact->add_option("--policy", policy, "policy JSON (default: placeholder for every label)");
    redact->add_flag("--strict", strict, "also reject snippets that recur anywhere in the output");
    redact->add_option("--audit", audit, "write per-document audit JSONL here");

    auto* serve = app.add_subcommand("serve", "run the adjudication service");
    serve->add_option("--config", config, "service configuration JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*stats)
            return cmd_stats(ann, as_json);
        if (*split)
            return cmd_split(docs, ratios, seed);
        if (*bio)
            return cmd_bio(docs, ann, max_tokens);
        if (*iaa)
            return cmd_iaa(docs, a, b, mode, as_json);
        if (*eval)
            return cmd_eval(gold, pred, docs, schema, overlap, as_json);
        if (*tag)
            return cmd_tag(docs, rules, name);
        if (*ground)
            return cmd_ground(docs, ext, max_edit, report);
        if (*redact)
            return cmd_redact(docs, gold, policy, strict, audit);
        if (*serve)
            return cmd_serve(config);
    } catch (const ipi::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
