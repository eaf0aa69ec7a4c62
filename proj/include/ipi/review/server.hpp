// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// HTTP/JSON front end of the review store.
//
//   GET  /docs                   document ids with annotation counts
//   GET  /docs/{id}              text, annotation sets, decisions, version
//   POST /docs/{id}/annotations  201 with the stored span and its version
//   POST /docs/{id}/decisions    201, or 409 when basis_version is stale
//   GET  /export/gold            consolidated gold set plus undecided spans
//   GET  /reports/iaa            agreement between the two annotator sources
//
// Errors: 401 bad token, 404 unknown document, 409 version conflict, 422
// invalid body with {"errors": [{"field", "message"}]}.

#include <memory>
#include <string>
#include <utility>

#include "httplib.h"
#include "json.hpp"

#include "ipi/agreement/report_io.hpp"
#include "ipi/review/config.hpp"
#include "ipi/review/store.hpp"

namespace ipi::review {

class ReviewServer {
public:
    ReviewServer(ReviewStore& store, ServiceConfig config) : store_(store), config_(std::move(config)) { routes(); }

    /// Binds to the configured address (port 0 picks a free port); returns the port.
    int bind()
    {
        if (config_.port == 0)
            port_ = server_.bind_to_any_port(config_.host);
        else
            port_ = server_.bind_to_port(config_.host, config_.port) ? config_.port : -1;
        if (port_ < 0)
            throw DataError("cannot bind " + config_.host + ":" + std::to_string(config_.port));
        return port_;
    }

    /// Serves until stop(); call bind() first.
    bool run() { return server_.listen_after_bind(); }

    void stop() { server_.stop(); }
    void wait_until_ready() const { server_.wait_until_ready(); }
    int port() const noexcept { return port_; }

private:
    static void send_json(httplib::Response& res, int status, const nlohmann::ordered_json& body)
    {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    static void send_error(httplib::Response& res, const ServiceError& e)
    {
        nlohmann::ordered_json body;
        body["error"] = e.what();
        auto fields = nlohmann::ordered_json::array();
        for (const auto& f : e.fields())
            fields.push_back({{"field", f.field}, {"message", f.message}});
        body["errors"] = std::move(fields);
        send_json(res, e.status(), body);
    }

    static nlohmann::json parse_body(const httplib::Request& req)
    {
        try {
            return nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception& e) {
            throw ServiceError(422, "request body is not valid JSON", {{"", e.what()}});
        }
    }

    template <typename Fn>
    httplib::Server::Handler guarded(Fn fn)
    {
        return [this, fn](const httplib::Request& req, httplib::Response& res) {
            try {
                if (!config_.token.empty() && req.get_header_value("Authorization") != "Bearer " + config_.token)
                    throw ServiceError(401, "missing or invalid bearer token");
                fn(req, res);
            } catch (const ServiceError& e) {
                send_error(res, e);
            } catch (const DataError& e) {
                send_error(res, ServiceError(422, e.what()));
            } catch (const std::exception& e) {
                send_error(res, ServiceError(500, e.what()));
            }
        };
    }

    void routes()
    {
        server_.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
            if (!config_.ui_origin.empty()) {
                res.set_header("Access-Control-Allow-Origin", config_.ui_origin);
                res.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type");
                res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
                res.set_header("Vary", "Origin");
            }
        });
        server_.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

        server_.Get("/docs", guarded([this](const httplib::Request&, httplib::Response& res) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& s : store_.list())
                arr.push_back({{"doc_id", s.doc_id},
                               {"version", s.version},
                               {"annotation_counts", s.annotation_counts},
                               {"decisions", s.decisions}});
            send_json(res, 200, arr);
        }));

        server_.Get(R"(/docs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, store_.document_view(req.matches[1]));
        }));

        server_.Post(R"(/docs/([^/]+)/annotations)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            store_.version(id); // 404 before body validation
            const auto span = store_.add_annotation(id, parse_body(req));
            send_json(res, 201, ipi::to_json(span));
        }));

        server_.Post(R"(/docs/([^/]+)/decisions)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            store_.version(id);
            const auto d = store_.add_decision(id, parse_body(req));
            send_json(res, 201, to_json(d));
        }));

        server_.Get("/export/gold", guarded([this](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, store_.export_gold());
        }));

        server_.Get("/reports/iaa", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto mode = req.get_param_value("mode") == "character" ? OverlapMode::Character : OverlapMode::Token;
            send_json(res, 200, ipi::to_json(store_.iaa(mode)));
        }));
    }

    ReviewStore& store_;
    ServiceConfig config_;
    httplib::Server server_;
    int port_ = -1;
};

} // namespace ipi::review
