// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Canonical JSONL shapes shared by every tool:
//   document   {"doc_id": str, "text": str, ...extra string fields kept as metadata}
//   annotation {"doc_id": str, "start": int, "end": int, "label": str, "source": str}
// Annotation lines may also carry "snippet" (checked against the text) and "version".

#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ipi/core/annotation_set.hpp"
#include "ipi/core/error.hpp"
#include "ipi/core/model.hpp"

namespace ipi {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::string where(const std::string& name, std::size_t line)
{
    return name + ":" + std::to_string(line) + ": ";
}

/// Calls `fn(object, line_no)` for every non-blank line; JSON and DataError
/// failures are rethrown as DataError prefixed with file:line.
inline void for_each_json_line(std::istream& in, const std::string& name,
                               const std::function<void(const json&, std::size_t)>& fn)
{
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(where(name, line_no) + "invalid JSON: " + e.what());
        }
        if (!obj.is_object())
            throw DataError(where(name, line_no) + "expected a JSON object");
        try {
            fn(obj, line_no);
        } catch (const DataError& e) {
            throw DataError(where(name, line_no) + e.what());
        } catch (const json::exception& e) {
            throw DataError(where(name, line_no) + e.what());
        }
    }
}

inline std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError(path.string() + ": cannot open file");
    return in;
}

inline const json& require(const json& obj, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw DataError(std::string("missing field \"") + key + "\"");
    return *it;
}

inline std::string require_string(const json& obj, const char* key)
{
    const auto& v = require(obj, key);
    if (!v.is_string())
        throw DataError(std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

inline std::size_t require_offset(const json& obj, const char* key)
{
    const auto& v = require(obj, key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw DataError(std::string("field \"") + key + "\" must be a non-negative integer");
    return v.get<std::size_t>();
}

} // namespace detail

inline Document document_from_json(const json& obj)
{
    std::map<std::string, std::string> meta;
    for (const auto& [k, v] : obj.items()) {
        if (k == "doc_id" || k == "text")
            continue;
        meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    return Document::from_utf8(detail::require_string(obj, "doc_id"), detail::require_string(obj, "text"),
                               std::move(meta));
}

inline ordered_json to_json(const Document& doc)
{
    ordered_json obj;
    obj["doc_id"] = doc.doc_id();
    obj["text"] = doc.utf8();
    for (const auto& [k, v] : doc.meta())
        obj[k] = v;
    return obj;
}

/// Parses one annotation object. With a document the span is validated and
/// its snippet filled in; without one only structural checks apply.
inline SpanAnnotation annotation_from_json(const json& obj, const Document* doc = nullptr)
{
    SpanAnnotation s;
    s.doc_id = detail::require_string(obj, "doc_id");
    s.start = detail::require_offset(obj, "start");
    s.end = detail::require_offset(obj, "end");
    s.category = parse_category(detail::require_string(obj, "label"));
    if (auto it = obj.find("source"); it != obj.end() && it->is_string())
        s.source = it->get<std::string>();
    if (auto it = obj.find("version"); it != obj.end() && it->is_number_unsigned())
        s.version = it->get<std::uint64_t>();
    if (s.start >= s.end)
        throw DataError("span start " + std::to_string(s.start) + " must be less than end " + std::to_string(s.end));
    if (doc) {
        if (s.end > doc->size())
            throw DataError("span [" + std::to_string(s.start) + "," + std::to_string(s.end) + ") exceeds document '" +
                            s.doc_id + "' of length " + std::to_string(doc->size()));
        auto actual = doc->slice(s.start, s.end);
        if (auto it = obj.find("snippet"); it != obj.end() && it->is_string() && it->get<std::string>() != actual)
            throw DataError("snippet \"" + it->get<std::string>() + "\" does not match document text \"" + actual +
                            "\"");
        s.snippet = std::move(actual);
    } else if (auto it = obj.find("snippet"); it != obj.end() && it->is_string()) {
        s.snippet = it->get<std::string>();
    }
    return s;
}

inline ordered_json to_json(const SpanAnnotation& s)
{
    ordered_json obj;
    obj["doc_id"] = s.doc_id;
    obj["start"] = s.start;
    obj["end"] = s.end;
    obj["label"] = std::string(to_string(s.category));
    obj["source"] = s.source;
    obj["snippet"] = s.snippet;
    if (s.version != 0)
        obj["version"] = s.version;
    return obj;
}

inline Corpus read_documents(std::istream& in, const std::string& name = "<documents>")
{
    Corpus corpus;
    detail::for_each_json_line(in, name, [&](const json& obj, std::size_t) { corpus.add(document_from_json(obj)); });
    return corpus;
}

inline Corpus read_documents(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    return read_documents(in, path.string());
}

/// With a corpus, unknown documents and out-of-bounds spans are data errors.
inline std::vector<SpanAnnotation> read_annotations(std::istream& in, const std::string& name = "<annotations>",
                                                    const Corpus* corpus = nullptr)
{
    std::vector<SpanAnnotation> out;
    detail::for_each_json_line(in, name, [&](const json& obj, std::size_t) {
        const Document* doc = nullptr;
        if (corpus) {
            auto id = detail::require_string(obj, "doc_id");
            doc = corpus->find(id);
            if (!doc)
                throw DataError("annotation references unknown doc_id '" + id + "'");
        }
        out.push_back(annotation_from_json(obj, doc));
    });
    return out;
}

inline std::vector<SpanAnnotation> read_annotations(const std::filesystem::path& path, const Corpus* corpus = nullptr)
{
    auto in = detail::open_input(path);
    return read_annotations(in, path.string(), corpus);
}

inline void write_jsonl(std::ostream& out, const std::vector<SpanAnnotation>& spans)
{
    for (const auto& s : spans)
        out << to_json(s).dump() << '\n';
}

inline void write_jsonl(std::ostream& out, const AnnotationSet& set)
{
    for (const auto& [_, spans] : set.documents())
        write_jsonl(out, spans);
}

} // namespace ipi
