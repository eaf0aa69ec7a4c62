// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <csignal>
#include <cstdio>
#include <regex>
#include <sstream>

#include <sys/wait.h>

#include "ipi/review/server.hpp"
#include "test_support.hpp"

namespace ipi {
namespace {

using nlohmann::json;

struct Run {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

// Runs the CLI with the given argument string; stdout and stderr are captured
// separately through a temp file.
Run run(const std::string& args)
{
    testing::TempDir tmp("cli-run");
    const auto err_path = tmp / "stderr";
    const auto cmd = quote(IPI_CLI_PATH) + " " + args + " 2>" + quote(err_path.string());
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return r;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;)
        r.out.append(buf, n);
    const int status = pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = testing::read_file(err_path);
    return r;
}

std::string sample(const std::string& name) { return quote(std::string(IPI_SOURCE_DIR) + "/data/sample/" + name); }

std::vector<json> jsonl(const std::string& text)
{
    std::vector<json> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty())
            out.push_back(json::parse(line));
    return out;
}

std::string squeeze(const std::string& s) { return std::regex_replace(s, std::regex("[ \t]+"), " "); }

TEST(Cli, StatsOnCategoryCounts)
{
    testing::TempDir dir("cli");
    const std::pair<const char*, int> counts[] = {{"FAMILY", 273}, {"BODY", 132},     {"DETAILS", 99},
                                                  {"SEC", 59},     {"FACILITY", 1421}, {"RELTIME", 4006},
                                                  {"LIFESTYLE", 144}, {"PHI_REF", 32}, {"OTHER", 33}};
    std::string lines;
    int k = 0;
    for (const auto& [label, n] : counts)
        for (int i = 0; i < n; ++i, ++k)
            lines += json{{"doc_id", "d" + std::to_string(k % 100)}, {"start", k}, {"end", k + 1}, {"label", label}}.dump() +
                     "\n";
    const auto path = dir.write("synthetic.jsonl", lines);

    const auto r = run("stats " + quote(path.string()));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto table = squeeze(r.out);
    EXPECT_NE(table.find("\nFAMILY 273 4.40%\n"), std::string::npos) << r.out;
    EXPECT_NE(table.find("\nRELTIME 4006 64.62%\n"), std::string::npos);
    EXPECT_NE(table.find("\nTOTAL 6199 100.00%\n"), std::string::npos);

    const auto j = json::parse(run("stats --json " + quote(path.string())).out);
    EXPECT_EQ(j["total"], 6199);
    EXPECT_EQ(j["categories"]["PHI_REF"]["count"], 32);
}

TEST(Cli, SplitHundredDocs)
{
    testing::TempDir dir("cli");
    std::string lines;
    for (int i = 0; i < 100; ++i)
        lines += json{{"doc_id", "doc-" + std::to_string(i)}, {"text", "x"}}.dump() + "\n";
    const auto path = quote(dir.write("docs.jsonl", lines).string());
    const auto r = run("split " + path + " --ratios 0.6,0.15,0.25 --seed 7");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto m = json::parse(r.out);
    EXPECT_EQ(m["train"].size(), 60u);
    EXPECT_EQ(m["dev"].size(), 15u);
    EXPECT_EQ(m["test"].size(), 25u);
    std::set<std::string> all;
    for (const auto* part : {"train", "dev", "test"})
        for (const auto& id : m[part])
            all.insert(id.get<std::string>());
    EXPECT_EQ(all.size(), 100u);
    EXPECT_EQ(run("split " + path + " --seed 7").out, r.out);
    EXPECT_NE(run("split " + path + " --seed 8").out, r.out);
    EXPECT_EQ(run("split " + path + " --ratios 0.6,abc,0.25").exit_code, 2);
}

TEST(Cli, BioExport)
{
    const auto r = run("bio " + sample("docs.jsonl") + " " + sample("gold.jsonl") + " --max-tokens 40");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::istringstream in(r.out);
    std::string prev = "O", line;
    std::size_t b_tags = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("-DOCSTART-", 0) == 0) {
            prev = "O";
            continue;
        }
        const auto tag = line.substr(line.rfind('\t') + 1);
        if (tag.rfind("I-", 0) == 0) {
            EXPECT_NE(prev, "O") << line;
            EXPECT_EQ(prev.substr(2), tag.substr(2)) << line;
        }
        b_tags += tag.rfind("B-", 0) == 0;
        prev = tag;
    }
    EXPECT_EQ(b_tags, 28u);
    const auto tight = run("bio " + sample("docs.jsonl") + " " + sample("gold.jsonl") + " --max-tokens 5");
    EXPECT_EQ(tight.exit_code, 1);
    EXPECT_NE(tight.err.find("more than max_tokens=5"), std::string::npos) << tight.err;
}

TEST(Cli, IaaAndEval)
{
    const auto same = run("iaa " + sample("gold.jsonl") + " " + sample("gold.jsonl") + " --docs " + sample("docs.jsonl") +
                          " --json");
    ASSERT_EQ(same.exit_code, 0) << same.err;
    EXPECT_EQ(json::parse(same.out)["micro_f1"], 1.0);

    const auto ab = run("iaa " + sample("annotator_a.jsonl") + " " + sample("annotator_b.jsonl") + " --docs " +
                        sample("docs.jsonl"));
    const auto ba = run("iaa " + sample("annotator_b.jsonl") + " " + sample("annotator_a.jsonl") + " --docs " +
                        sample("docs.jsonl"));
    ASSERT_EQ(ab.exit_code, 0) << ab.err;
    EXPECT_EQ(ab.out, ba.out);

    const auto perfect = run("eval " + sample("gold.jsonl") + " " + sample("gold.jsonl"));
    ASSERT_EQ(perfect.exit_code, 0) << perfect.err;
    EXPECT_NE(squeeze(perfect.out).find("micro average 1.00 1.00 1.00 28"), std::string::npos) << perfect.out;

    for (const auto* schema : {"type", "strict", "exact", "partial"}) {
        const auto r = run("eval " + sample("gold.jsonl") + " " + sample("annotator_b.jsonl") + " --docs " +
                           sample("docs.jsonl") + " --overlap token --json --schema " + schema);
        ASSERT_EQ(r.exit_code, 0) << r.err;
        const auto j = json::parse(r.out);
        EXPECT_EQ(j["schema"], schema);
    }
    EXPECT_EQ(run("eval " + sample("gold.jsonl") + " " + sample("gold.jsonl") + " --overlap token").exit_code, 2);
    EXPECT_NE(run("eval " + sample("gold.jsonl") + " " + sample("gold.jsonl") + " --schema loose").exit_code, 0);
}

TEST(Cli, TagIsDeterministic)
{
    const auto r = run("tag " + sample("docs.jsonl"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = jsonl(r.out);
    ASSERT_FALSE(rows.empty());
    EXPECT_EQ(rows[0]["snippet"], "33-year-old");
    EXPECT_EQ(rows[0]["source"], "rules:default");
    EXPECT_EQ(run("tag " + sample("docs.jsonl")).out, r.out);

    testing::TempDir dir("cli");
    const auto rules = dir.write("clinic.tsv", "FACILITY\tgazetteer\tclinic\n");
    const auto custom = jsonl(run("tag " + sample("docs.jsonl") + " --rules " + quote(rules.string())).out);
    ASSERT_EQ(custom.size(), 1u);
    EXPECT_EQ(custom[0]["source"], "rules:clinic");
    const auto bad = dir.write("bad.tsv", "FACILITY\tgazetteer\tclinic\nAGE\tregex\tx\n");
    const auto err = run("tag " + sample("docs.jsonl") + " --rules " + quote(bad.string()));
    EXPECT_EQ(err.exit_code, 1);
    EXPECT_NE(err.err.find(bad.string() + ":2:"), std::string::npos) << err.err;
}

TEST(Cli, GroundWithReport)
{
    testing::TempDir dir("cli");
    const auto report = dir / "report.json";
    const auto r = run("ground " + sample("docs.jsonl") + " " + sample("extractions.jsonl") + " --report " +
                       quote(report.string()));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(jsonl(r.out).size(), 6u);
    const auto j = json::parse(testing::read_file(report));
    EXPECT_EQ(j["total"], 7);
    EXPECT_EQ(j["rejected"], 1);
    EXPECT_DOUBLE_EQ(j["hallucination_rate"].get<double>(), 1.0 / 7.0);

    const auto strict = run("ground " + sample("docs.jsonl") + " " + sample("extractions.jsonl") +
                            " --max-edit-distance 0");
    EXPECT_EQ(jsonl(strict.out).size(), 5u);
}

TEST(Cli, RedactWorkedSentence)
{
    testing::TempDir dir("cli");
    const auto docs = dir.write("docs.jsonl", R"({"doc_id":"d","text":"He works as a carpenter."})"
                                              "\n");
    const auto gold = dir.write("gold.jsonl", R"({"doc_id":"d","start":3,"end":23,"label":"SEC"})"
                                              "\n");
    const auto audit = dir / "audit.jsonl";
    const auto r = run("redact " + quote(docs.string()) + " " + quote(gold.string()) + " --audit " + quote(audit.string()));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = jsonl(r.out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0]["text"], "He [SEC].");
    const auto a = jsonl(testing::read_file(audit));
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0]["verified"], true);
    EXPECT_EQ(a[0]["policy_fingerprint"], rows[0]["policy_fingerprint"]);

    const auto keep = dir.write("keep.json", R"({"default":"KEEP"})");
    EXPECT_EQ(jsonl(run("redact " + quote(docs.string()) + " " + quote(gold.string()) + " --policy " +
                        quote(keep.string()))
                        .out)[0]["text"],
              "He works as a carpenter.");

    const auto sample_run = run("redact " + sample("docs.jsonl") + " " + sample("gold.jsonl") + " --policy " +
                                sample("policy.json"));
    ASSERT_EQ(sample_run.exit_code, 0) << sample_run.err;
    EXPECT_EQ(jsonl(sample_run.out).size(), 3u);
}

TEST(Cli, StrictRedactionFailureExitsThree)
{
    testing::TempDir dir("cli");
    const auto docs = dir.write("docs.jsonl", R"({"doc_id":"d","text":"Moved to the ICU, then back to the ICU."})"
                                              "\n");
    const auto gold = dir.write("gold.jsonl", R"({"doc_id":"d","start":13,"end":16,"label":"FACILITY"})"
                                              "\n");
    const auto lenient = run("redact " + quote(docs.string()) + " " + quote(gold.string()));
    EXPECT_EQ(lenient.exit_code, 0) << lenient.err;
    const auto strict = run("redact " + quote(docs.string()) + " " + quote(gold.string()) + " --strict");
    EXPECT_EQ(strict.exit_code, 3);
    EXPECT_NE(strict.err.find("verification failed for 1 document(s)"), std::string::npos) << strict.err;
}

TEST(Cli, DiagnosticsCarryFileAndLine)
{
    testing::TempDir dir("cli");
    const auto docs = dir.write("docs.jsonl", R"({"doc_id":"a","text":"abc"})"
                                              "\n"
                                              R"({"doc_id":"b","text":)"
                                              "\n");
    auto r = run("split " + quote(docs.string()));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find(docs.string() + ":2:"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());

    const auto good = dir.write("good.jsonl", R"({"doc_id":"a","text":"abc"})"
                                              "\n");
    const auto ann = dir.write("ann.jsonl", R"({"doc_id":"a","start":0,"end":2,"label":"SEC"})"
                                            "\n"
                                            R"({"doc_id":"a","start":1,"end":9,"label":"SEC"})"
                                            "\n");
    r = run("bio " + quote(good.string()) + " " + quote(ann.string()));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find(ann.string() + ":2:"), std::string::npos) << r.err;

    r = run("stats " + quote((dir / "missing.jsonl").string()));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("missing.jsonl"), std::string::npos) << r.err;

    EXPECT_NE(run("frobnicate").exit_code, 0);
    EXPECT_NE(run("").exit_code, 0);
}

TEST(Cli, ServeAnswersAndStopsOnSignal)
{
    testing::TempDir dir("cli");
    dir.write("documents.jsonl", R"({"doc_id":"a","text":"Her son visited."})"
                                 "\n");
    const auto cfg = dir.write("service.json", R"({"listen":"127.0.0.1:0","data_dir":".","token":"t"})");
    // the shell prints its pid and then becomes the server
    const auto cmd = "sh -c 'echo $$; exec " + std::string(IPI_CLI_PATH) + " serve --config " + cfg.string() + "' 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    ASSERT_NE(p, nullptr);
    char line[64] = {};
    ASSERT_NE(std::fgets(line, sizeof line, p), nullptr);
    const pid_t pid = static_cast<pid_t>(std::stol(line));
    ASSERT_NE(std::fgets(line, sizeof line, p), nullptr);
    const int port = std::stoi(line);

    httplib::Client c("127.0.0.1", port);
    c.set_bearer_token_auth("t");
    auto res = c.Post("/docs/a/annotations", R"({"start":4,"end":7,"label":"FAMILY","source":"annotator_a"})",
                      "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    EXPECT_EQ(c.Get("/docs")->status, 200);

    ::kill(pid, SIGTERM);
    const int status = pclose(p);
    EXPECT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "snapshot.json"));
    EXPECT_NE(testing::read_file(dir / "events.jsonl").find("\"FAMILY\""), std::string::npos);
}

} // namespace
} // namespace ipi
