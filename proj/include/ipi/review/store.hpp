// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// State behind the review service: documents, annotation sets keyed by
// source, and an append-only decision log. Every write is appended to
// events.jsonl (fsync'd before it is acknowledged); snapshot.json records the
// folded state after a prefix of the log and only shortens start-up replay.
//
// Gold export is a pure fold over the state, so replaying the same log gives
// byte-identical output.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "json.hpp"

#include "ipi/agreement/agreement.hpp"
#include "ipi/core/annotation_set.hpp"
#include "ipi/corpus/jsonl.hpp"

namespace ipi::review {

using nlohmann::json;
using nlohmann::ordered_json;

struct FieldError {
    std::string field;
    std::string message;
};

/// Request-level failure carrying the HTTP status the service answers with.
class ServiceError : public std::runtime_error {
public:
    ServiceError(int status, std::string message, std::vector<FieldError> fields = {})
        : std::runtime_error(message), status_(status), fields_(std::move(fields))
    {
    }
    int status() const noexcept { return status_; }
    const std::vector<FieldError>& fields() const noexcept { return fields_; }

private:
    int status_;
    std::vector<FieldError> fields_;
};

enum class DecisionKind { AcceptA, AcceptB, Merged, RejectBoth };

inline std::string_view to_string(DecisionKind k) noexcept
{
    switch (k) {
    case DecisionKind::AcceptA: return "ACCEPT_A";
    case DecisionKind::AcceptB: return "ACCEPT_B";
    case DecisionKind::Merged: return "MERGED";
    case DecisionKind::RejectBoth: return "REJECT_BOTH";
    }
    return "?";
}

inline std::optional<DecisionKind> parse_decision_kind(std::string_view s) noexcept
{
    for (auto k : {DecisionKind::AcceptA, DecisionKind::AcceptB, DecisionKind::Merged, DecisionKind::RejectBoth})
        if (to_string(k) == s)
            return k;
    return std::nullopt;
}

/// Resolution of the disagreement inside [start, end). `basis_version` is
/// the document version the adjudicator saw; any write to the document since
/// then (an annotation from either source or another decision) makes the
/// decision stale.
struct AdjudicationDecision {
    std::string doc_id;
    std::size_t start = 0;
    std::size_t end = 0;
    DecisionKind kind = DecisionKind::RejectBoth;
    std::optional<SpanAnnotation> merged; // the custom span of a MERGED decision
    std::string adjudicator;
    std::string timestamp;
    std::uint64_t basis_version = 0;
    std::uint64_t version = 0;
};

inline ordered_json to_json(const AdjudicationDecision& d)
{
    ordered_json out;
    out["doc_id"] = d.doc_id;
    out["region"] = {{"start", d.start}, {"end", d.end}};
    out["kind"] = std::string(to_string(d.kind));
    if (d.merged)
        out["span"] = {{"start", d.merged->start},
                       {"end", d.merged->end},
                       {"label", std::string(ipi::to_string(d.merged->category))}};
    out["adjudicator"] = d.adjudicator;
    out["timestamp"] = d.timestamp;
    out["basis_version"] = d.basis_version;
    out["version"] = d.version;
    return out;
}

struct StoreOptions {
    std::string annotator_a = "annotator_a";
    std::string annotator_b = "annotator_b";
    std::size_t snapshot_every = 100; // 0 disables snapshots
};

struct DocumentSummary {
    std::string doc_id;
    std::uint64_t version = 0;
    std::map<std::string, std::size_t> annotation_counts;
    std::size_t decisions = 0;
};

inline std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
    return buf;
}

class ReviewStore {
public:
    /// In-memory store (no persistence).
    explicit ReviewStore(Corpus corpus, StoreOptions options = {})
        : corpus_(std::move(corpus)), options_(std::move(options))
    {
        init_docs();
    }

    /// Persistent store rooted at `data_dir`, which must hold documents.jsonl.
    /// Existing snapshot and event log are replayed.
    ReviewStore(const std::filesystem::path& data_dir, StoreOptions options)
        : options_(std::move(options)), data_dir_(data_dir)
    {
        corpus_ = read_documents(data_dir / "documents.jsonl");
        init_docs();
        replay();
        log_ = std::fopen((data_dir_ / "events.jsonl").c_str(), "ab");
        if (!log_)
            throw DataError((data_dir_ / "events.jsonl").string() + ": cannot open event log for appending");
    }

    ReviewStore(const ReviewStore&) = delete;
    ReviewStore& operator=(const ReviewStore&) = delete;

    ~ReviewStore()
    {
        if (log_)
            std::fclose(log_);
    }

    const Corpus& corpus() const noexcept { return corpus_; }
    const StoreOptions& options() const noexcept { return options_; }

    std::vector<DocumentSummary> list() const
    {
        std::shared_lock lock(mutex_);
        std::vector<DocumentSummary> out;
        for (const auto& [id, st] : docs_) {
            DocumentSummary s{id, st.version, {}, st.decisions.size()};
            for (const auto& [source, spans] : st.annotations)
                s.annotation_counts[source] = AnnotationSet::from_spans(source, spans).size();
            out.push_back(std::move(s));
        }
        return out;
    }

    ordered_json document_view(const std::string& doc_id) const
    {
        std::shared_lock lock(mutex_);
        const auto& st = doc_state(doc_id);
        ordered_json out;
        out["doc_id"] = doc_id;
        out["text"] = corpus_.at(doc_id).utf8();
        out["version"] = st.version;
        ordered_json sets = ordered_json::object();
        for (const auto& [source, spans] : st.annotations) {
            auto arr = ordered_json::array();
            const auto set = AnnotationSet::from_spans(source, spans);
            for (const auto& s : set.spans(doc_id))
                arr.push_back(ipi::to_json(s));
            sets[source] = std::move(arr);
        }
        out["annotations"] = std::move(sets);
        auto decisions = ordered_json::array();
        for (const auto& d : st.decisions)
            decisions.push_back(to_json(d));
        out["decisions"] = std::move(decisions);
        return out;
    }

    std::uint64_t version(const std::string& doc_id) const
    {
        std::shared_lock lock(mutex_);
        return doc_state(doc_id).version;
    }

    /// Validates and stores an annotation; returns it with its assigned version.
    SpanAnnotation add_annotation(const std::string& doc_id, const json& body)
    {
        std::unique_lock lock(mutex_);
        const auto& doc = require_doc(doc_id);
        auto span = parse_annotation(doc, body);
        span.version = docs_.at(doc_id).version + 1;
        ordered_json event = {{"type", "annotation"}, {"annotation", ipi::to_json(span)}};
        append(event);
        apply_annotation(span);
        maybe_snapshot();
        return span;
    }

    AdjudicationDecision add_decision(const std::string& doc_id, const json& body)
    {
        std::unique_lock lock(mutex_);
        const auto& doc = require_doc(doc_id);
        auto d = parse_decision(doc, body);
        const auto current = docs_.at(doc_id).version;
        if (d.basis_version != current)
            throw ServiceError(409, "stale basis_version " + std::to_string(d.basis_version) + "; document '" +
                                        doc_id + "' is at version " + std::to_string(current));
        d.version = current + 1;
        d.timestamp = utc_timestamp();
        append({{"type", "decision"}, {"decision", to_json(d)}});
        apply_decision(d);
        maybe_snapshot();
        return d;
    }

    AnnotationSet annotation_set(const std::string& source) const
    {
        std::shared_lock lock(mutex_);
        return annotation_set_locked(source);
    }

    /// Consolidated gold set. Inside an active decision region the decision
    /// alone determines the output; elsewhere spans on which both annotators
    /// agree exactly are gold and all other spans are listed as undecided.
    /// A later decision whose region overlaps an earlier one supersedes it.
    ordered_json export_gold() const
    {
        std::shared_lock lock(mutex_);
        auto gold_spans = ordered_json::array();
        auto undecided = ordered_json::array();
        for (const auto& [id, st] : docs_) {
            const auto a = source_spans(st, id, options_.annotator_a);
            const auto b = source_spans(st, id, options_.annotator_b);

            std::vector<const AdjudicationDecision*> active;
            for (const auto& d : st.decisions) {
                std::erase_if(active, [&](const AdjudicationDecision* prev) {
                    return std::max(prev->start, d.start) < std::min(prev->end, d.end);
                });
                active.push_back(&d);
            }
            auto governed = [&](const SpanAnnotation& s) {
                return std::any_of(active.begin(), active.end(), [&](const AdjudicationDecision* d) {
                    return std::max(d->start, s.start) < std::min(d->end, s.end);
                });
            };
            auto in_region = [](const AdjudicationDecision& d, const SpanAnnotation& s) {
                return std::max(d.start, s.start) < std::min(d.end, s.end);
            };
            auto has_twin = [](const SpanAnnotation& s, const std::vector<SpanAnnotation>& other) {
                return std::any_of(other.begin(), other.end(), [&](const SpanAnnotation& o) {
                    return o.start == s.start && o.end == s.end && o.category == s.category;
                });
            };

            std::vector<SpanAnnotation> gold;
            for (const auto* side : {&a, &b}) {
                const auto& other = side == &a ? b : a;
                for (const auto& s : *side) {
                    if (governed(s))
                        continue;
                    if (has_twin(s, other))
                        gold.push_back(s);
                    else
                        undecided.push_back(ipi::to_json(s));
                }
            }
            for (const auto* d : active) {
                switch (d->kind) {
                case DecisionKind::AcceptA:
                    for (const auto& s : a)
                        if (in_region(*d, s))
                            gold.push_back(s);
                    break;
                case DecisionKind::AcceptB:
                    for (const auto& s : b)
                        if (in_region(*d, s))
                            gold.push_back(s);
                    break;
                case DecisionKind::Merged:
                    gold.push_back(*d->merged);
                    break;
                case DecisionKind::RejectBoth:
                    break;
                }
            }
            for (auto& s : gold) {
                s.source = "gold";
                s.version = 0;
            }
            for (const auto& s : merge_same_category(gold))
                gold_spans.push_back(ipi::to_json(s));
        }
        ordered_json out;
        out["source"] = "gold";
        out["annotations"] = std::move(gold_spans);
        out["undecided"] = std::move(undecided);
        return out;
    }

    AgreementReport iaa(OverlapMode mode = OverlapMode::Token) const
    {
        std::shared_lock lock(mutex_);
        return pairwise_relaxed_f1(annotation_set_locked(options_.annotator_a),
                                   annotation_set_locked(options_.annotator_b), corpus_, mode);
    }

    /// Writes snapshot.json for the current state.
    void snapshot() const
    {
        std::shared_lock lock(mutex_);
        write_snapshot();
    }

private:
    struct DocState {
        std::uint64_t version = 0;
        std::map<std::string, std::vector<SpanAnnotation>> annotations; // raw, by source
        std::vector<AdjudicationDecision> decisions;
    };

    void init_docs()
    {
        for (const auto& [id, _] : corpus_)
            docs_[id];
    }

    const Document& require_doc(const std::string& doc_id) const
    {
        const auto* doc = corpus_.find(doc_id);
        if (!doc)
            throw ServiceError(404, "unknown document '" + doc_id + "'");
        return *doc;
    }

    const DocState& doc_state(const std::string& doc_id) const
    {
        require_doc(doc_id);
        return docs_.at(doc_id);
    }

    std::vector<SpanAnnotation> source_spans(const DocState& st, const std::string& doc_id,
                                             const std::string& source) const
    {
        auto it = st.annotations.find(source);
        if (it == st.annotations.end())
            return {};
        return AnnotationSet::from_spans(source, it->second).spans(doc_id);
    }

    AnnotationSet annotation_set_locked(const std::string& source) const
    {
        std::vector<SpanAnnotation> all;
        for (const auto& [id, st] : docs_)
            if (auto it = st.annotations.find(source); it != st.annotations.end())
                all.insert(all.end(), it->second.begin(), it->second.end());
        return AnnotationSet::from_spans(source, all);
    }

    static std::optional<std::size_t> offset_field(const json& body, const char* key, std::vector<FieldError>& errors)
    {
        auto it = body.find(key);
        if (it == body.end()) {
            errors.push_back({key, "required"});
            return std::nullopt;
        }
        if (!it->is_number_integer() || it->get<long long>() < 0) {
            errors.push_back({key, "must be a non-negative integer"});
            return std::nullopt;
        }
        return it->get<std::size_t>();
    }

    static std::optional<Category> label_field(const json& body, const char* key, std::vector<FieldError>& errors)
    {
        auto it = body.find(key);
        if (it == body.end() || !it->is_string()) {
            errors.push_back({key, "required string"});
            return std::nullopt;
        }
        auto c = try_parse_category(it->get<std::string>());
        if (!c)
            errors.push_back({key, "unknown category '" + it->get<std::string>() + "'"});
        return c;
    }

    static void check_bounds(const Document& doc, std::optional<std::size_t> start, std::optional<std::size_t> end,
                             const std::string& prefix, std::vector<FieldError>& errors)
    {
        if (start && end && *start >= *end)
            errors.push_back({prefix + "start", "must be less than end"});
        if (end && *end > doc.size())
            errors.push_back({prefix + "end", "exceeds document length " + std::to_string(doc.size())});
    }

    static SpanAnnotation parse_annotation(const Document& doc, const json& body)
    {
        if (!body.is_object())
            throw ServiceError(422, "annotation must be a JSON object", {{"", "expected object"}});
        std::vector<FieldError> errors;
        if (auto it = body.find("doc_id"); it != body.end() && (!it->is_string() || it->get<std::string>() != doc.doc_id()))
            errors.push_back({"doc_id", "does not match the document in the path"});
        const auto start = offset_field(body, "start", errors);
        const auto end = offset_field(body, "end", errors);
        const auto label = label_field(body, "label", errors);
        std::string source;
        if (auto it = body.find("source"); it == body.end() || !it->is_string() || it->get<std::string>().empty())
            errors.push_back({"source", "required non-empty string"});
        else
            source = it->get<std::string>();
        check_bounds(doc, start, end, "", errors);
        if (errors.empty()) {
            if (auto it = body.find("snippet"); it != body.end() && it->is_string() &&
                                                it->get<std::string>() != doc.slice(*start, *end))
                errors.push_back({"snippet", "does not match the document text at [start, end)"});
        }
        if (!errors.empty())
            throw ServiceError(422, "invalid annotation", std::move(errors));
        return make_span(doc, *start, *end, *label, source);
    }

    static AdjudicationDecision parse_decision(const Document& doc, const json& body)
    {
        if (!body.is_object())
            throw ServiceError(422, "decision must be a JSON object", {{"", "expected object"}});
        std::vector<FieldError> errors;
        AdjudicationDecision d;
        d.doc_id = doc.doc_id();
        auto region = body.find("region");
        if (region == body.end() || !region->is_object()) {
            errors.push_back({"region", "required object with start and end"});
        } else {
            auto s = offset_field(*region, "start", errors);
            auto e = offset_field(*region, "end", errors);
            check_bounds(doc, s, e, "region.", errors);
            for (auto& fe : errors)
                if (fe.field == "start" || fe.field == "end")
                    fe.field = "region." + fe.field;
            if (s && e) {
                d.start = *s;
                d.end = *e;
            }
        }
        auto kind = body.find("kind");
        std::optional<DecisionKind> k;
        if (kind == body.end() || !kind->is_string() || !(k = parse_decision_kind(kind->get<std::string>())))
            errors.push_back({"kind", "must be one of ACCEPT_A, ACCEPT_B, MERGED, REJECT_BOTH"});
        else
            d.kind = *k;
        if (auto it = body.find("adjudicator"); it == body.end() || !it->is_string() || it->get<std::string>().empty())
            errors.push_back({"adjudicator", "required non-empty string"});
        else
            d.adjudicator = it->get<std::string>();
        if (auto it = body.find("basis_version"); it == body.end() || !it->is_number_integer() || it->get<long long>() < 0)
            errors.push_back({"basis_version", "required non-negative integer"});
        else
            d.basis_version = it->get<std::uint64_t>();
        if (k == DecisionKind::Merged) {
            auto span = body.find("span");
            if (span == body.end() || !span->is_object()) {
                errors.push_back({"span", "MERGED decisions need a span object"});
            } else {
                std::vector<FieldError> span_errors;
                auto s = offset_field(*span, "start", span_errors);
                auto e = offset_field(*span, "end", span_errors);
                auto label = label_field(*span, "label", span_errors);
                check_bounds(doc, s, e, "", span_errors);
                for (auto& fe : span_errors)
                    errors.push_back({"span." + fe.field, fe.message});
                if (span_errors.empty())
                    d.merged = make_span(doc, *s, *e, *label, "gold");
            }
        }
        if (!errors.empty())
            throw ServiceError(422, "invalid decision", std::move(errors));
        return d;
    }

    void apply_annotation(const SpanAnnotation& span)
    {
        auto& st = docs_.at(span.doc_id);
        st.annotations[span.source].push_back(span);
        st.version = std::max(st.version, span.version);
    }

    void apply_decision(const AdjudicationDecision& d)
    {
        auto& st = docs_.at(d.doc_id);
        st.decisions.push_back(d);
        st.version = std::max(st.version, d.version);
    }

    void apply_event(const json& event)
    {
        const auto type = event.at("type").get<std::string>();
        if (type == "annotation") {
            const auto& a = event.at("annotation");
            const auto& doc = corpus_.at(a.at("doc_id").get<std::string>());
            auto span = annotation_from_json(a, &doc);
            span.version = a.at("version").get<std::uint64_t>();
            apply_annotation(span);
        } else if (type == "decision") {
            const auto& j = event.at("decision");
            const auto& doc = corpus_.at(j.at("doc_id").get<std::string>());
            auto d = parse_decision(doc, j);
            d.version = j.at("version").get<std::uint64_t>();
            d.timestamp = j.value("timestamp", "");
            apply_decision(d);
        } else {
            throw DataError("unknown event type '" + type + "'");
        }
    }

    void replay()
    {
        std::size_t skip = 0;
        const auto snap_path = data_dir_ / "snapshot.json";
        if (std::filesystem::exists(snap_path)) {
            std::ifstream in(snap_path);
            json snap;
            try {
                snap = json::parse(in);
            } catch (const json::exception& e) {
                throw DataError(snap_path.string() + ": " + e.what());
            }
            skip = snap.at("events").get<std::size_t>();
            for (const auto& event : snap.at("state"))
                apply_event(event);
        }
        const auto log_path = data_dir_ / "events.jsonl";
        if (!std::filesystem::exists(log_path))
            return;
        std::ifstream in(log_path);
        std::size_t index = 0;
        detail::for_each_json_line(in, log_path.string(), [&](const json& event, std::size_t) {
            if (index++ >= skip)
                apply_event(event);
        });
        if (index < skip)
            throw DataError(snap_path.string() + ": snapshot covers " + std::to_string(skip) +
                            " events but the log holds only " + std::to_string(index));
        events_ = index;
    }

    /// The snapshot stores the state as a canonical event list (annotations
    /// then decisions per document), which replays into the same state.
    void write_snapshot() const
    {
        if (data_dir_.empty())
            return;
        auto state = ordered_json::array();
        for (const auto& [id, st] : docs_) {
            std::vector<const SpanAnnotation*> spans;
            for (const auto& [source, list] : st.annotations)
                for (const auto& s : list)
                    spans.push_back(&s);
            std::stable_sort(spans.begin(), spans.end(),
                             [](const SpanAnnotation* x, const SpanAnnotation* y) { return x->version < y->version; });
            for (const auto* s : spans)
                state.push_back({{"type", "annotation"}, {"annotation", ipi::to_json(*s)}});
            for (const auto& d : st.decisions)
                state.push_back({{"type", "decision"}, {"decision", to_json(d)}});
        }
        ordered_json snap = {{"events", events_}, {"state", std::move(state)}};
        const auto tmp = data_dir_ / "snapshot.json.tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            out << snap.dump() << '\n';
            out.flush();
            if (!out)
                throw DataError(tmp.string() + ": failed to write snapshot");
        }
        std::filesystem::rename(tmp, data_dir_ / "snapshot.json");
    }

    void append(const ordered_json& event)
    {
        ++events_;
        if (!log_)
            return;
        const auto line = event.dump() + "\n";
        if (std::fwrite(line.data(), 1, line.size(), log_) != line.size() || std::fflush(log_) != 0 ||
            ::fsync(::fileno(log_)) != 0) {
            --events_;
            throw ServiceError(500, "failed to persist event");
        }
    }

    void maybe_snapshot() const
    {
        if (options_.snapshot_every && events_ % options_.snapshot_every == 0)
            write_snapshot();
    }

    Corpus corpus_;
    StoreOptions options_;
    std::filesystem::path data_dir_;
    std::FILE* log_ = nullptr;
    std::size_t events_ = 0;
    std::map<std::string, DocState> docs_;
    mutable std::shared_mutex mutex_;
};

} // namespace ipi::review
