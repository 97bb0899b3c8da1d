#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file chat.hpp
 * @brief Chat backends standing in for the dialogue model.
 *
 * ScriptedChat answers from a fixture file (line k = reply to the k-th user
 * message) and never touches the network. RemoteChat posts to an
 * OpenAI-compatible /v1/chat/completions endpoint.
 */

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "dialogue.hpp"
#include "error.hpp"
#include "transport.hpp"

namespace attrib {

struct ChatMessage {
    Role role = Role::Teacher;
    std::string content;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

/// Full history plus the new teacher message, in chat order.
inline std::vector<ChatMessage> chat_history(const Dialogue& dialogue, const std::string& teacher_text) {
    std::vector<ChatMessage> out;
    for (const auto& t : dialogue.turns()) {
        out.push_back({Role::Teacher, t.teacher_text});
        if (!t.assistant_text.empty()) out.push_back({Role::Assistant, t.assistant_text});
    }
    out.push_back({Role::Teacher, teacher_text});
    return out;
}

class ScriptedChat final : public ChatBackend {
public:
    explicit ScriptedChat(std::vector<std::string> lines) : lines_(std::move(lines)) {}

    static ScriptedChat from_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw Error(Errc::Io, "cannot read chat script " + path.string());
        std::vector<std::string> lines;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(line);
        }
        return ScriptedChat(std::move(lines));
    }

    std::string complete(const std::vector<ChatMessage>& messages) override {
        std::size_t turn = 0;
        for (const auto& m : messages) turn += m.role == Role::Teacher;
        if (turn == 0 || turn > lines_.size()) {
            throw Error(Errc::Backend, "chat script has no reply for turn " + std::to_string(turn), 502);
        }
        return lines_[turn - 1];
    }

private:
    std::vector<std::string> lines_;
};

class RemoteChat final : public ChatBackend {
public:
    RemoteChat(std::string endpoint_url, std::string model, std::shared_ptr<HttpTransport> transport,
               RetryPolicy policy = {}, int max_in_flight = 4, SleepFn sleep = default_sleep())
        : model_(std::move(model)),
          client_(std::move(transport), std::move(endpoint_url), policy, max_in_flight,
                  std::move(sleep)) {}

    std::string complete(const std::vector<ChatMessage>& messages) override {
        nlohmann::json msgs = nlohmann::json::array();
        for (const auto& m : messages) {
            msgs.push_back({{"role", m.role == Role::Teacher ? "user" : "assistant"},
                            {"content", m.content}});
        }
        const nlohmann::json body = {{"model", model_}, {"messages", std::move(msgs)}};
        const auto raw = client_.post_json("/v1/chat/completions", body.dump());
        try {
            const auto j = nlohmann::json::parse(raw);
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::Protocol, std::string("chat response: ") + e.what());
        }
    }

private:
    std::string model_;
    RetryingClient client_;
};

}  // namespace attrib
