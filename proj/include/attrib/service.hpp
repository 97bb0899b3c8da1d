#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file service.hpp
 * @brief Session service core, independent of HTTP.
 *
 * Operations on one session run under that session's mutex; different
 * sessions proceed in parallel. Every mutation is committed to the
 * SessionStore before the caller sees its result, and a failed backend call
 * leaves the session untouched.
 *
 * Recommendation detection is the client's job: attribute() explains
 * whichever reply the client names (default: the latest assistant reply).
 */

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>

#include "attribution.hpp"
#include "chat.hpp"
#include "error.hpp"
#include "explanation.hpp"
#include "json.hpp"
#include "score_cache.hpp"
#include "session_store.hpp"

namespace attrib {

using Clock = std::function<std::int64_t()>;

inline Clock system_clock_ms() {
    return [] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    };
}

class Service {
public:
    /// `explainer` may be null, in which case explanations use the template.
    Service(std::shared_ptr<SessionStore> store, std::shared_ptr<ChatBackend> chat,
            std::shared_ptr<CachingScorer> scorer, std::shared_ptr<ChatBackend> explainer = nullptr,
            Clock clock = system_clock_ms())
        : store_(std::move(store)),
          chat_(std::move(chat)),
          scorer_(std::move(scorer)),
          explainer_(std::move(explainer)),
          clock_(std::move(clock)),
          ids_(std::random_device{}()) {
        if (!store_ || !chat_ || !scorer_) {
            throw Error(Errc::InvalidArgument, "service needs a store, a chat backend and a scorer");
        }
    }

    Session create_session() {
        std::string id;
        {
            std::lock_guard lock(id_mutex_);
            do {
                id = random_id();
            } while (store_->contains(id));
        }
        store_->commit({{"op", "create"}, {"id", id}, {"ts", clock_()}});
        return *store_->find(id);
    }

    Session get_session(const std::string& id) const {
        auto s = store_->find(id);
        if (!s) throw Error(Errc::NotFound, "unknown session '" + id + "'");
        return *s;
    }

    std::string post_message(const std::string& id, const std::string& teacher_text) {
        auto lock = lock_session(id);
        const auto session = get_session(id);
        if (teacher_text.empty()) throw Error(Errc::InvalidArgument, "message text must be non-empty");
        std::string reply;
        try {
            reply = chat_->complete(chat_history(session.dialogue, teacher_text));
        } catch (const Error& e) {
            throw Error(Errc::Backend, std::string("chat backend failed: ") + e.what(), 502);
        }
        store_->commit({{"op", "turn"},
                        {"id", id},
                        {"ts", clock_()},
                        {"teacher", teacher_text},
                        {"assistant", reply}});
        return reply;
    }

    AttributionResult attribute(const std::string& id, std::optional<std::string> target = {},
                                std::optional<Method> method = {}) {
        auto lock = lock_session(id);
        const auto session = get_session(id);
        if (session.dialogue.empty()) {
            throw Error(Errc::Conflict, "session '" + id + "' has no turns to attribute");
        }
        if (!target) {
            for (auto it = session.dialogue.turns().rbegin(); it != session.dialogue.turns().rend(); ++it) {
                if (!it->assistant_text.empty()) {
                    target = it->assistant_text;
                    break;
                }
            }
            if (!target) throw Error(Errc::Conflict, "no assistant reply to attribute yet");
        }
        const TargetResponse response(*target);
        const Dialogue context = attribution_context(session.dialogue, response.text());
        AttributionResult result;
        try {
            result = attrib::attribute(context, response, method.value_or(Method::Hierarchical), *scorer_);
        } catch (const Error& e) {
            if (e.code() == Errc::NoEvidence) throw Error(Errc::Conflict, e.what());
            if (e.code() == Errc::Backend || e.code() == Errc::Protocol) {
                throw Error(Errc::Backend, std::string("scorer failed: ") + e.what(), 502);
            }
            throw;
        }
        store_->commit({{"op", "attribution"},
                        {"id", id},
                        {"ts", clock_()},
                        {"target", *target},
                        {"result", attribution_to_json(result)}});
        return result;
    }

    Explanation explain(const std::string& id) {
        auto lock = lock_session(id);
        const auto session = get_session(id);
        if (!session.last_attribution || !session.last_target) {
            throw Error(Errc::Conflict, "session '" + id + "' has no attribution to explain");
        }
        auto explanation = attrib::explain(TargetResponse(*session.last_target),
                                           session.last_attribution->evidence, explainer_.get());
        store_->commit({{"op", "explanation"},
                        {"id", id},
                        {"ts", clock_()},
                        {"explanation", explanation_to_json(explanation)}});
        return explanation;
    }

    const CachingScorer& scorer() const { return *scorer_; }
    CachingScorer& scorer() { return *scorer_; }

private:
    std::unique_lock<std::mutex> lock_session(const std::string& id) {
        if (!store_->contains(id)) throw Error(Errc::NotFound, "unknown session '" + id + "'");
        std::shared_ptr<std::mutex> m;
        {
            std::lock_guard guard(locks_mutex_);
            auto& slot = locks_[id];
            if (!slot) slot = std::make_shared<std::mutex>();
            m = slot;
        }
        // Slots are never erased, so the mutex outlives the returned lock.
        return std::unique_lock<std::mutex>(*m);
    }

    std::string random_id() {
        static constexpr char kHex[] = "0123456789abcdef";
        std::string id;
        auto bits = ids_();
        for (int i = 0; i < 16; ++i, bits >>= 4) id.push_back(kHex[bits & 0xF]);
        return id;
    }

    std::shared_ptr<SessionStore> store_;
    std::shared_ptr<ChatBackend> chat_;
    std::shared_ptr<CachingScorer> scorer_;
    std::shared_ptr<ChatBackend> explainer_;
    Clock clock_;
    std::mt19937_64 ids_;
    std::mutex id_mutex_;
    std::mutex locks_mutex_;
    std::map<std::string, std::shared_ptr<std::mutex>> locks_;
};

}  // namespace attrib
