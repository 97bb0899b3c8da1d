#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file session_store.hpp
 * @brief File-backed session state: an append-only JSONL mutation log plus
 *        an occasional full snapshot.
 *
 * Log records (one per mutation):
 *   {"op": "create",      "id": s, "ts": ms}
 *   {"op": "turn",        "id": s, "ts": ms, "teacher": s, "assistant": s}
 *   {"op": "attribution", "id": s, "ts": ms, "target": s, "result": {...}}
 *   {"op": "explanation", "id": s, "ts": ms, "explanation": {...}}
 *
 * Startup loads `<log>.snapshot` when present and replays the log on top.
 * Every `snapshot_every` mutations the snapshot is rewritten (temp file +
 * rename) and the log truncated. A torn final log line is ignored; a
 * malformed line anywhere else is an error naming the line.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "attribution.hpp"
#include "dialogue.hpp"
#include "error.hpp"
#include "explanation.hpp"
#include "json.hpp"

namespace attrib {

struct Session {
    std::string id;
    Dialogue dialogue;
    std::int64_t created_at = 0;  // ms since epoch
    std::int64_t updated_at = 0;
    std::optional<std::string> last_target;
    std::optional<AttributionResult> last_attribution;
    std::optional<Explanation> last_explanation;
};

inline json explanation_to_json(const Explanation& e) {
    return {{"strategy_text", e.strategy_text},
            {"evidence", sentence_to_json(e.evidence)},
            {"narrative", e.narrative},
            {"generator", generator_name(e.generator)}};
}

inline Explanation explanation_from_json(const json& j) {
    return {j.at("strategy_text").get<std::string>(), sentence_from_json(j.at("evidence")),
            j.at("narrative").get<std::string>(),
            parse_generator(j.at("generator").get<std::string>())};
}

inline json session_to_json(const Session& s) {
    return {{"id", s.id},
            {"created_at", s.created_at},
            {"updated_at", s.updated_at},
            {"dialogue", dialogue_to_json(s.dialogue)},
            {"last_target", s.last_target ? json(*s.last_target) : json(nullptr)},
            {"last_attribution",
             s.last_attribution ? attribution_to_json(*s.last_attribution) : json(nullptr)},
            {"last_explanation",
             s.last_explanation ? explanation_to_json(*s.last_explanation) : json(nullptr)}};
}

inline Session session_from_json(const json& j) {
    Session s;
    s.id = j.at("id").get<std::string>();
    s.created_at = j.at("created_at").get<std::int64_t>();
    s.updated_at = j.at("updated_at").get<std::int64_t>();
    s.dialogue = dialogue_from_json(j.at("dialogue"));
    if (!j.at("last_target").is_null()) s.last_target = j["last_target"].get<std::string>();
    if (!j.at("last_attribution").is_null()) s.last_attribution = attribution_from_json(j["last_attribution"]);
    if (!j.at("last_explanation").is_null()) s.last_explanation = explanation_from_json(j["last_explanation"]);
    return s;
}

class SessionStore {
public:
    /// An empty path keeps everything in memory.
    explicit SessionStore(std::filesystem::path log_path = {}, std::size_t snapshot_every = 1000)
        : log_path_(std::move(log_path)), snapshot_every_(snapshot_every) {
        if (log_path_.empty()) return;
        load_snapshot();
        replay_log();
        log_.open(log_path_, std::ios::app);
        if (!log_) throw Error(Errc::Io, "cannot open session log " + log_path_.string());
    }

    /// Applies one mutation record and appends it to the log.
    void commit(const json& record) {
        std::lock_guard lock(mutex_);
        apply(record);
        if (log_path_.empty()) return;
        log_ << record.dump() << '\n';
        log_.flush();
        if (!log_) throw Error(Errc::Io, "session log write failed");
        if (snapshot_every_ > 0 && ++since_snapshot_ >= snapshot_every_) write_snapshot_locked();
    }

    std::optional<Session> find(const std::string& id) const {
        std::lock_guard lock(mutex_);
        const auto it = sessions_.find(id);
        if (it == sessions_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const std::string& id) const {
        std::lock_guard lock(mutex_);
        return sessions_.contains(id);
    }

    std::vector<std::string> ids() const {
        std::lock_guard lock(mutex_);
        std::vector<std::string> out;
        for (const auto& [id, _] : sessions_) out.push_back(id);
        return out;
    }

    void snapshot() {
        std::lock_guard lock(mutex_);
        if (!log_path_.empty()) write_snapshot_locked();
    }

    std::filesystem::path snapshot_path() const {
        return std::filesystem::path(log_path_.string() + ".snapshot");
    }

private:
    Session& existing(const json& record) {
        const auto id = record.at("id").get<std::string>();
        const auto it = sessions_.find(id);
        if (it == sessions_.end()) throw Error(Errc::NotFound, "unknown session '" + id + "'");
        return it->second;
    }

    void apply(const json& record) {
        const auto op = record.at("op").get<std::string>();
        const auto ts = record.at("ts").get<std::int64_t>();
        if (op == "create") {
            Session s;
            s.id = record.at("id").get<std::string>();
            s.dialogue = Dialogue(s.id);
            s.created_at = s.updated_at = ts;
            if (!sessions_.emplace(s.id, s).second) {
                throw Error(Errc::Conflict, "session '" + s.id + "' already exists");
            }
            return;
        }
        Session& s = existing(record);
        if (op == "turn") {
            s.dialogue.append(record.at("teacher").get<std::string>(),
                              record.at("assistant").get<std::string>());
        } else if (op == "attribution") {
            s.last_target = record.at("target").get<std::string>();
            s.last_attribution = attribution_from_json(record.at("result"));
            s.last_explanation.reset();
        } else if (op == "explanation") {
            s.last_explanation = explanation_from_json(record.at("explanation"));
        } else {
            throw Error(Errc::Io, "unknown session log op '" + op + "'");
        }
        s.updated_at = ts;
    }

    void load_snapshot() {
        std::ifstream in(snapshot_path());
        if (!in) return;
        try {
            const auto j = json::parse(in);
            for (const auto& s : j.at("sessions")) {
                auto session = session_from_json(s);
                sessions_.emplace(session.id, std::move(session));
            }
        } catch (const json::exception& e) {
            throw Error(Errc::Io, "corrupt session snapshot " + snapshot_path().string() + ": " + e.what());
        }
    }

    void replay_log() {
        std::ifstream in(log_path_, std::ios::binary);
        if (!in) return;
        const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::size_t pos = 0;
        std::size_t line_no = 0;
        while (pos < content.size()) {
            const auto nl = content.find('\n', pos);
            const bool terminated = nl != std::string::npos;
            const auto line = content.substr(pos, terminated ? nl - pos : std::string::npos);
            pos = terminated ? nl + 1 : content.size();
            ++line_no;
            if (line.empty()) continue;
            try {
                apply(json::parse(line));
            } catch (const std::exception& e) {
                if (!terminated) break;  // torn final write
                throw Error(Errc::Io, log_path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
    }

    void write_snapshot_locked() {
        json all = json::array();
        for (const auto& [_, s] : sessions_) all.push_back(session_to_json(s));
        const auto tmp = std::filesystem::path(snapshot_path().string() + ".tmp");
        {
            std::ofstream out(tmp, std::ios::trunc);
            out << json{{"sessions", std::move(all)}}.dump() << '\n';
            if (!out) throw Error(Errc::Io, "cannot write session snapshot " + tmp.string());
        }
        std::filesystem::rename(tmp, snapshot_path());
        log_.close();
        log_.open(log_path_, std::ios::trunc);
        if (!log_) throw Error(Errc::Io, "cannot reopen session log " + log_path_.string());
        since_snapshot_ = 0;
    }

    std::filesystem::path log_path_;
    std::size_t snapshot_every_;
    std::size_t since_snapshot_ = 0;
    mutable std::mutex mutex_;
    std::map<std::string, Session> sessions_;
    std::ofstream log_;
};

}  // namespace attrib
