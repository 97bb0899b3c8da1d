#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file http_server.hpp
 * @brief JSON-over-HTTP front end for Service.
 *
 *   POST /sessions                      -> {"id"}
 *   GET  /sessions/{id}                 -> session
 *   POST /sessions/{id}/messages        {"text"}                  -> {"reply"}
 *   POST /sessions/{id}/attribute       {"target"?, "method"?}    -> attribution
 *   POST /sessions/{id}/explain                                   -> explanation
 *
 * Errors answer {"error": message, "kind": errc} with 400/404/409/502/500.
 */

#include <functional>
#include <optional>
#include <string>

#include <httplib.h>

#include "error.hpp"
#include "json.hpp"
#include "service.hpp"

namespace attrib {

inline int http_status_for(Errc code) {
    switch (code) {
        case Errc::NotFound: return 404;
        case Errc::Conflict:
        case Errc::NoEvidence: return 409;
        case Errc::Backend:
        case Errc::Protocol: return 502;
        case Errc::Io: return 500;
        default: return 400;
    }
}

class HttpServer {
public:
    explicit HttpServer(Service& service) : service_(service) { routes(); }

    /// Binds and returns the port (an ephemeral one when `port` is 0).
    int bind(const std::string& host, int port) {
        const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
        if (bound < 0) throw Error(Errc::Io, "cannot bind " + host + ":" + std::to_string(port));
        return bound;
    }

    /// Blocks until stop().
    bool listen_after_bind() { return server_.listen_after_bind(); }
    void stop() { server_.stop(); }
    void wait_until_ready() const { server_.wait_until_ready(); }

private:
    using Handler = std::function<json(const httplib::Request&, httplib::Response&)>;

    void handle(const httplib::Request& req, httplib::Response& res, const Handler& fn) {
        res.set_header("Access-Control-Allow-Origin", "*");
        try {
            const auto body = fn(req, res);
            res.set_content(body.dump(), "application/json");
        } catch (const Error& e) {
            res.status = http_status_for(e.code());
            res.set_content(json{{"error", e.what()}, {"kind", errc_name(e.code())}}.dump(),
                            "application/json");
        } catch (const json::exception& e) {
            res.status = 400;
            res.set_content(json{{"error", e.what()}, {"kind", "invalid-argument"}}.dump(),
                            "application/json");
        }
    }

    static json body_of(const httplib::Request& req) {
        if (req.body.empty()) return json::object();
        auto j = json::parse(req.body);
        if (!j.is_object()) throw Error(Errc::InvalidArgument, "request body must be a JSON object");
        return j;
    }

    void route(const char* method, const std::string& pattern, Handler fn) {
        auto wrapped = [this, fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
            handle(req, res, fn);
        };
        if (std::string(method) == "GET") {
            server_.Get(pattern, wrapped);
        } else {
            server_.Post(pattern, wrapped);
        }
    }

    void routes() {
        server_.Options(".*", [](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Origin", "*");
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.status = 204;
        });
        route("POST", "/sessions", [this](const httplib::Request&, httplib::Response& res) {
            res.status = 201;
            return json{{"id", service_.create_session().id}};
        });
        route("GET", R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response&) {
            return session_to_json(service_.get_session(req.matches[1]));
        });
        route("POST", R"(/sessions/([^/]+)/messages)", [this](const httplib::Request& req, httplib::Response&) {
            const auto body = body_of(req);
            const auto text = body.at("text").get<std::string>();
            return json{{"reply", service_.post_message(req.matches[1], text)}};
        });
        route("POST", R"(/sessions/([^/]+)/attribute)", [this](const httplib::Request& req, httplib::Response&) {
            const auto body = body_of(req);
            std::optional<std::string> target;
            std::optional<Method> method;
            if (body.contains("target") && !body["target"].is_null()) target = body["target"].get<std::string>();
            if (body.contains("method") && !body["method"].is_null()) {
                method = parse_method(body["method"].get<std::string>());
            }
            return attribution_to_json(service_.attribute(req.matches[1], target, method));
        });
        route("POST", R"(/sessions/([^/]+)/explain)", [this](const httplib::Request& req, httplib::Response&) {
            return explanation_to_json(service_.explain(req.matches[1]));
        });
    }

    Service& service_;
    httplib::Server server_;
};

}  // namespace attrib
