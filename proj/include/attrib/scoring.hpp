#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file scoring.hpp
 * @brief The conditional log-likelihood contract log P(continuation | context)
 *        and the hermetic lexical reference scorer.
 *
 * Scores are total natural-log likelihoods over the continuation with no
 * length normalization. Every attribution routine is written against the
 * `ScorerLike` concept; `Scorer` is the runtime-polymorphic form used when
 * the backend is chosen from configuration.
 */

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "error.hpp"
#include "utf8.hpp"

namespace attrib {

struct ScoreRequest {
    std::string context;
    std::string continuation;

    friend bool operator==(const ScoreRequest&, const ScoreRequest&) = default;
};

/// Total log-likelihood in nats.
struct LogLikelihood {
    double value = 0.0;
};

inline void validate(const ScoreRequest& request) {
    if (request.context.empty()) {
        throw Error(Errc::InvalidArgument, "score request context is empty");
    }
    if (request.continuation.empty()) {
        throw Error(Errc::InvalidArgument, "score request continuation is empty");
    }
}

template <typename S>
concept ScorerLike = requires(S& scorer, const ScoreRequest& request) {
    { scorer.logprob(request) } -> std::convertible_to<LogLikelihood>;
};

/// Runtime-selectable scorer. Implementations must be safe to call from
/// several threads at once.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual LogLikelihood logprob(const ScoreRequest& request) = 0;
    virtual std::string name() const = 0;
};

namespace detail {

// General punctuation, CJK symbols/punctuation and the full-width ASCII
// punctuation block separate tokens; every other non-ASCII code point is a
// word character.
inline bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') ||
               (cp >= U'A' && cp <= U'Z');
    }
    if (utf8::is_space(cp)) return false;
    if (cp >= 0x2000 && cp <= 0x206F) return false;
    if (cp >= 0x3000 && cp <= 0x303F) return false;
    if ((cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
        (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65)) {
        return false;
    }
    return cp != 0xFFFD;
}

}  // namespace detail

/// Lowercase (ASCII), split on any non-alphanumeric, drop empties.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (const auto& cp : utf8::decode(text)) {
        if (detail::is_word_char(cp.value)) {
            char32_t c = cp.value;
            if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
            utf8::append(current, c);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

/**
 * Add-one smoothed unigram likelihood of the continuation under the
 * context's token distribution:
 *
 *   N = |tokens(context)|, V = |set(context) ∪ set(continuation)|
 *   score = Σ_{t in continuation} ln((count_context(t) + 1) / (N + V))
 *
 * count + 1 ≤ N + 1 ≤ N + V, so every term is ≤ 0.
 */
inline LogLikelihood lexical_score(std::string_view context, std::string_view continuation) {
    const auto cont_tokens = tokenize(continuation);
    if (cont_tokens.empty()) {
        throw Error(Errc::InvalidContinuation, "continuation has no tokens");
    }
    const auto ctx_tokens = tokenize(context);

    std::unordered_map<std::string_view, std::size_t> counts;
    for (const auto& t : ctx_tokens) ++counts[t];
    std::unordered_set<std::string_view> vocab;
    for (const auto& [t, _] : counts) vocab.insert(t);
    for (const auto& t : cont_tokens) vocab.insert(t);

    const double denom = static_cast<double>(ctx_tokens.size() + vocab.size());
    double total = 0.0;
    for (const auto& t : cont_tokens) {
        const auto it = counts.find(t);
        const double count = it == counts.end() ? 0.0 : static_cast<double>(it->second);
        total += std::log((count + 1.0) / denom);
    }
    return LogLikelihood{total};
}

class LexicalScorer final : public Scorer {
public:
    LogLikelihood logprob(const ScoreRequest& request) override {
        validate(request);
        return lexical_score(request.context, request.continuation);
    }
    std::string name() const override { return "lexical"; }
};

}  // namespace attrib
