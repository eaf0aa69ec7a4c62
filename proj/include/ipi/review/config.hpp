// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "ipi/core/error.hpp"
#include "ipi/review/store.hpp"

namespace ipi::review {

/// Service configuration. A JSON file supplies the base values:
///
///   {"listen": "127.0.0.1:8080", "data_dir": "review-data", "token": "...",
///    "ui_origin": "http://localhost:5173",
///    "annotators": ["annotator_a", "annotator_b"], "snapshot_every": 100}
///
/// and IPI_LISTEN, IPI_DATA_DIR, IPI_TOKEN, IPI_UI_ORIGIN, IPI_ANNOTATORS
/// (comma-separated pair) and IPI_SNAPSHOT_EVERY override it.
struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path data_dir = "review-data";
    std::string token;
    std::string ui_origin;
    StoreOptions store;
};

inline void parse_listen(ServiceConfig& cfg, const std::string& listen)
{
    const auto colon = listen.rfind(':');
    if (colon == std::string::npos)
        throw DataError("listen address '" + listen + "' must be HOST:PORT");
    cfg.host = listen.substr(0, colon);
    try {
        cfg.port = std::stoi(listen.substr(colon + 1));
    } catch (const std::exception&) {
        throw DataError("listen address '" + listen + "' has an invalid port");
    }
    if (cfg.port < 0 || cfg.port > 65535)
        throw DataError("listen port out of range in '" + listen + "'");
}

inline void parse_annotators(ServiceConfig& cfg, const std::string& list)
{
    const auto comma = list.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == list.size())
        throw DataError("annotators must name exactly two sources, got '" + list + "'");
    cfg.store.annotator_a = list.substr(0, comma);
    cfg.store.annotator_b = list.substr(comma + 1);
}

template <typename Getenv>
ServiceConfig apply_environment(ServiceConfig cfg, Getenv getenv_fn)
{
    if (const char* v = getenv_fn("IPI_LISTEN"))
        parse_listen(cfg, v);
    if (const char* v = getenv_fn("IPI_DATA_DIR"))
        cfg.data_dir = v;
    if (const char* v = getenv_fn("IPI_TOKEN"))
        cfg.token = v;
    if (const char* v = getenv_fn("IPI_UI_ORIGIN"))
        cfg.ui_origin = v;
    if (const char* v = getenv_fn("IPI_ANNOTATORS"))
        parse_annotators(cfg, v);
    if (const char* v = getenv_fn("IPI_SNAPSHOT_EVERY"))
        cfg.store.snapshot_every = static_cast<std::size_t>(std::stoul(v));
    return cfg;
}

inline ServiceConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base = {})
{
    ServiceConfig cfg;
    try {
        if (j.contains("listen"))
            parse_listen(cfg, j.at("listen").get<std::string>());
        if (j.contains("data_dir")) {
            std::filesystem::path p = j.at("data_dir").get<std::string>();
            cfg.data_dir = p.is_relative() && !base.empty() ? base / p : p;
        }
        cfg.token = j.value("token", "");
        cfg.ui_origin = j.value("ui_origin", "");
        if (j.contains("annotators")) {
            const auto& a = j.at("annotators");
            if (!a.is_array() || a.size() != 2)
                throw DataError("\"annotators\" must be an array of two source names");
            cfg.store.annotator_a = a[0].get<std::string>();
            cfg.store.annotator_b = a[1].get<std::string>();
        }
        cfg.store.snapshot_every = j.value("snapshot_every", cfg.store.snapshot_every);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

/// Reads the config file (paths in it are relative to the file) and applies
/// environment overrides.
inline ServiceConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError(path.string() + ": cannot open configuration file");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    try {
        return apply_environment(parse_config(j, path.parent_path()), [](const char* k) { return std::getenv(k); });
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

} // namespace ipi::review
