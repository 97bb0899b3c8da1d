#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file config.hpp
 * @brief Service configuration file and backend factories.
 *
 *   {
 *     "listen": "127.0.0.1:8080",
 *     "store": "sessions.jsonl",
 *     "snapshot_every": 1000,
 *     "cache": "scores.jsonl",                       (optional)
 *     "scorer": {"kind": "lexical"}
 *             | {"kind": "remote", "endpoint_url": ..., "model_name": ...,
 *                "timeout_ms": ..., "max_retries": ..., "backoff_ms": ...,
 *                "max_in_flight": ...},
 *     "chat":   {"kind": "scripted", "script_path": ...}
 *             | {"kind": "remote", "endpoint_url": ..., "model_name": ...}
 *   }
 */

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "chat.hpp"
#include "error.hpp"
#include "json.hpp"
#include "remote_scorer.hpp"
#include "score_cache.hpp"
#include "scoring.hpp"

namespace attrib {

struct ChatBackendConfig {
    enum class Kind { Scripted, Remote };

    Kind kind = Kind::Scripted;
    std::string script_path;
    std::string endpoint_url;
    std::string model_name;

    void validate() const {
        if (kind == Kind::Scripted) {
            if (script_path.empty() || !endpoint_url.empty() || !model_name.empty()) {
                throw Error(Errc::InvalidArgument, "scripted chat takes exactly script_path");
            }
        } else if (endpoint_url.empty() || model_name.empty() || !script_path.empty()) {
            throw Error(Errc::InvalidArgument, "remote chat takes exactly endpoint_url and model_name");
        }
    }
};

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string store_path = "sessions.jsonl";
    std::size_t snapshot_every = 1000;
    std::string cache_path;
    ScorerBackendConfig scorer;
    ChatBackendConfig chat;

    void validate() const {
        if (port < 0 || port > 65535) throw Error(Errc::InvalidArgument, "listen port out of range");
        scorer.validate();
        chat.validate();
    }
};

inline void parse_listen(const std::string& listen, std::string& host, int& port) {
    const auto colon = listen.rfind(':');
    if (colon == std::string::npos || colon == 0) {
        throw Error(Errc::InvalidArgument, "listen address must be host:port, got '" + listen + "'");
    }
    host = listen.substr(0, colon);
    try {
        std::size_t used = 0;
        port = std::stoi(listen.substr(colon + 1), &used);
        if (used != listen.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw Error(Errc::InvalidArgument, "bad port in listen address '" + listen + "'");
    }
}

inline ScorerBackendConfig scorer_config_from_json(const json& j) {
    ScorerBackendConfig c;
    const auto kind = j.value("kind", std::string("lexical"));
    if (kind == "lexical") {
        c.kind = ScorerBackendConfig::Kind::Lexical;
    } else if (kind == "remote") {
        c.kind = ScorerBackendConfig::Kind::Remote;
    } else {
        throw Error(Errc::InvalidArgument, "scorer kind must be lexical or remote");
    }
    c.endpoint_url = j.value("endpoint_url", std::string());
    c.model_name = j.value("model_name", std::string());
    c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.backoff_ms = j.value("backoff_ms", c.backoff_ms);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    return c;
}

inline ServiceConfig service_config_from_json(const json& j) {
    ServiceConfig c;
    try {
        if (j.contains("listen")) parse_listen(j["listen"].get<std::string>(), c.host, c.port);
        c.store_path = j.value("store", c.store_path);
        c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
        c.cache_path = j.value("cache", std::string());
        if (j.contains("scorer")) c.scorer = scorer_config_from_json(j["scorer"]);
        if (j.contains("chat")) {
            const auto& chat = j["chat"];
            const auto kind = chat.value("kind", std::string("scripted"));
            if (kind == "scripted") {
                c.chat.kind = ChatBackendConfig::Kind::Scripted;
            } else if (kind == "remote") {
                c.chat.kind = ChatBackendConfig::Kind::Remote;
            } else {
                throw Error(Errc::InvalidArgument, "chat kind must be scripted or remote");
            }
            c.chat.script_path = chat.value("script_path", std::string());
            c.chat.endpoint_url = chat.value("endpoint_url", std::string());
            c.chat.model_name = chat.value("model_name", std::string());
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("bad service config: ") + e.what());
    }
    return c;
}

inline ServiceConfig load_service_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot read config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(Errc::InvalidArgument, "config " + path.string() + " is not JSON: " + e.what());
    }
    auto config = service_config_from_json(j);
    // Relative paths in the file resolve against the file's directory.
    const auto base = path.parent_path();
    auto rebase = [&](std::string& p) {
        if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).string();
    };
    rebase(config.store_path);
    rebase(config.cache_path);
    rebase(config.chat.script_path);
    return config;
}

inline std::shared_ptr<Scorer> make_backend_scorer(const ScorerBackendConfig& config,
                                                   std::shared_ptr<HttpTransport> transport) {
    config.validate();
    if (config.kind == ScorerBackendConfig::Kind::Lexical) return std::make_shared<LexicalScorer>();
    return std::make_shared<RemoteScorer>(config, std::move(transport));
}

inline std::shared_ptr<CachingScorer> make_cached_scorer(const ScorerBackendConfig& config,
                                                         std::shared_ptr<HttpTransport> transport,
                                                         const std::string& cache_path = {}) {
    auto cache = cache_path.empty() ? std::make_shared<ScoreCache>()
                                    : std::make_shared<ScoreCache>(cache_path);
    return std::make_shared<CachingScorer>(make_backend_scorer(config, std::move(transport)),
                                           std::move(cache));
}

inline std::shared_ptr<ChatBackend> make_chat(const ChatBackendConfig& config,
                                              std::shared_ptr<HttpTransport> transport) {
    config.validate();
    if (config.kind == ChatBackendConfig::Kind::Scripted) {
        return std::make_shared<ScriptedChat>(ScriptedChat::from_file(config.script_path));
    }
    return std::make_shared<RemoteChat>(config.endpoint_url, config.model_name, std::move(transport));
}

}  // namespace attrib
