#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file remote_scorer.hpp
 * @brief Scorer adapter over an OpenAI-compatible /v1/completions endpoint.
 *
 * Request: {"model": m, "prompt": context + continuation, "max_tokens": 0,
 *           "echo": true, "logprobs": 0}
 *
 * The echoed prompt tokens are aligned against the context/continuation
 * boundary by character offset (`text_offset` when present, otherwise the
 * running length of the token strings). Tokens that end at or before the
 * boundary belong to the context and are ignored; a token straddling the
 * boundary, a null logprob inside the continuation, or continuation tokens
 * that do not spell the continuation exactly are protocol errors.
 */

#include <cstddef>
#include <memory>
#include <string>
#include <utility>

#include <json.hpp>

#include "error.hpp"
#include "scoring.hpp"
#include "transport.hpp"
#include "utf8.hpp"

namespace attrib {

struct ScorerBackendConfig {
    enum class Kind { Lexical, Remote };

    Kind kind = Kind::Lexical;
    std::string endpoint_url;
    std::string model_name;
    int timeout_ms = 30000;
    int max_retries = 3;
    int backoff_ms = 200;
    int max_in_flight = 4;

    void validate() const {
        if (kind == Kind::Remote && (endpoint_url.empty() || model_name.empty())) {
            throw Error(Errc::InvalidArgument, "remote scorer needs endpoint_url and model_name");
        }
        if (timeout_ms <= 0 || max_retries < 0 || backoff_ms < 0 || max_in_flight < 1) {
            throw Error(Errc::InvalidArgument, "scorer timeout/retry settings out of range");
        }
    }

    RetryPolicy retry_policy() const {
        return {max_retries, std::chrono::milliseconds(timeout_ms),
                std::chrono::milliseconds(backoff_ms)};
    }
};

inline nlohmann::json completions_request_body(const std::string& model,
                                               const ScoreRequest& request) {
    return {{"model", model},
            {"prompt", request.context + request.continuation},
            {"max_tokens", 0},
            {"echo", true},
            {"logprobs", 0}};
}

/// Sums the continuation's token logprobs out of an echoed completions
/// response. Throws Errc::Protocol on any shape or alignment problem.
inline LogLikelihood parse_echo_logprobs(const nlohmann::json& response,
                                         const ScoreRequest& request) {
    auto fail = [](const std::string& why) -> void {
        throw Error(Errc::Protocol, "completions response: " + why);
    };
    if (!response.is_object() || !response.contains("choices") ||
        !response["choices"].is_array() || response["choices"].empty()) {
        fail("missing choices");
    }
    const auto& choice = response["choices"][0];
    if (!choice.is_object() || !choice.contains("logprobs") || !choice["logprobs"].is_object()) {
        fail("missing logprobs");
    }
    const auto& lp = choice["logprobs"];
    if (!lp.contains("tokens") || !lp.contains("token_logprobs") || !lp["tokens"].is_array() ||
        !lp["token_logprobs"].is_array()) {
        fail("logprobs lacks tokens/token_logprobs");
    }
    const auto& tokens = lp["tokens"];
    const auto& values = lp["token_logprobs"];
    if (tokens.size() != values.size()) fail("tokens and token_logprobs differ in length");
    const bool have_offsets = lp.contains("text_offset") && lp["text_offset"].is_array();
    if (have_offsets && lp["text_offset"].size() != tokens.size()) {
        fail("text_offset length differs from tokens");
    }

    const std::size_t boundary = utf8::length(request.context);
    std::size_t running = 0;
    std::string spelled;
    double total = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        if (!tokens[k].is_string()) fail("non-string token");
        const auto text = tokens[k].get<std::string>();
        const std::size_t len = utf8::length(text);
        std::size_t offset = running;
        if (have_offsets) {
            const auto& o = lp["text_offset"][k];
            if (!o.is_number_integer() || o.get<long long>() < 0) fail("bad text_offset");
            offset = o.get<std::size_t>();
        }
        running = offset + len;
        if (offset + len <= boundary) continue;
        if (offset < boundary) {
            fail("token " + std::to_string(k) + " straddles the context/continuation boundary");
        }
        if (!values[k].is_number()) fail("null logprob for continuation token " + std::to_string(k));
        if (offset - boundary != utf8::length(spelled)) {
            fail("continuation tokens are not contiguous at token " + std::to_string(k));
        }
        total += values[k].get<double>();
        spelled += text;
        any = true;
    }
    if (!any || spelled != request.continuation) {
        fail("echoed continuation tokens do not spell the requested continuation");
    }
    return LogLikelihood{total};
}

class RemoteScorer final : public Scorer {
public:
    RemoteScorer(const ScorerBackendConfig& config, std::shared_ptr<HttpTransport> transport,
                 SleepFn sleep = default_sleep())
        : model_(config.model_name),
          client_((config.validate(), std::move(transport)), config.endpoint_url,
                  config.retry_policy(), config.max_in_flight, std::move(sleep)) {}

    LogLikelihood logprob(const ScoreRequest& request) override {
        validate(request);
        const auto body = completions_request_body(model_, request).dump();
        const auto raw = client_.post_json("/v1/completions", body);
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(raw);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(Errc::Protocol, std::string("completions response is not JSON: ") + e.what());
        }
        return parse_echo_logprobs(parsed, request);
    }

    std::string name() const override { return "remote:" + model_; }

    TransportTelemetry telemetry() const { return client_.telemetry(); }

private:
    std::string model_;
    RetryingClient client_;
};

}  // namespace attrib
