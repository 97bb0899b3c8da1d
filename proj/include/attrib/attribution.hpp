#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file attribution.hpp
 * @brief Hierarchical evidence attribution and the flat baselines.
 *
 * With L(x) = log P(target | x):
 *
 *   turn gain   g_i  = L(C_i) - L(C_{i-1})             C_i = dialogue prefix
 *   drop        D_j  = L(U) - L(U \ s_j)                U   = teacher context
 *   hold        H_j  = L(s_j) - L(U)
 *   phi         phi_j = D_j + H_j  (= L(s_j) - L(U \ s_j))
 *
 * The hierarchical method picks the turn with the largest gain and ranks
 * that turn's teacher sentences by phi. The flat variants pool every
 * teacher sentence of the dialogue into one context and rank by phi
 * (Drop+Hold) or by drop alone (leave-one-out). Ties always go to the
 * earlier position.
 */

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialogue.hpp"
#include "error.hpp"
#include "scoring.hpp"
#include "similarity.hpp"

namespace attrib {

enum class Method { Hierarchical, FlatDropHold, FlatLOO, Similarity };

inline constexpr Method kAllMethods[] = {Method::Hierarchical, Method::FlatDropHold,
                                         Method::FlatLOO, Method::Similarity};

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Hierarchical: return "hierarchical";
        case Method::FlatDropHold: return "drop-hold";
        case Method::FlatLOO: return "loo";
        case Method::Similarity: return "similarity";
    }
    return "?";
}

/// Row label used in report tables.
inline const char* method_label(Method m) {
    switch (m) {
        case Method::Hierarchical: return "Hierarchical";
        case Method::FlatDropHold: return "Drop+Hold";
        case Method::FlatLOO: return "Leave-one-out";
        case Method::Similarity: return "Similarity";
    }
    return "?";
}

inline Method parse_method(std::string_view name) {
    for (Method m : kAllMethods) {
        if (name == method_name(m)) return m;
    }
    throw Error(Errc::InvalidArgument,
                "unknown method '" + std::string(name) +
                    "' (expected hierarchical, drop-hold, loo or similarity)");
}

struct TurnGain {
    int turn_index = 0;
    double gain = 0.0;

    friend bool operator==(const TurnGain&, const TurnGain&) = default;
};

/// `score` is what the method ranked by: phi for the Drop+Hold methods,
/// drop for leave-one-out, cosine similarity for Similarity (where the
/// likelihood fields stay zero).
struct SentenceScore {
    Sentence sentence;
    double drop = 0.0;
    double hold = 0.0;
    double phi = 0.0;
    double score = 0.0;

    friend bool operator==(const SentenceScore&, const SentenceScore&) = default;
};

struct AttributionResult {
    Method method = Method::Hierarchical;
    std::optional<int> selected_turn;
    std::vector<SentenceScore> ranked;
    Sentence evidence;
    std::optional<std::vector<TurnGain>> turn_gains;

    friend bool operator==(const AttributionResult&, const AttributionResult&) = default;
};

namespace detail {

template <ScorerLike S>
double likelihood(S& scorer, std::string context, const TargetResponse& target) {
    return LogLikelihood(scorer.logprob(ScoreRequest{std::move(context), target.text()})).value;
}

/// Stable descending sort on `score`: equal scores keep input order.
inline void rank_descending(std::vector<SentenceScore>& scores) {
    std::stable_sort(scores.begin(), scores.end(),
                     [](const SentenceScore& a, const SentenceScore& b) { return a.score > b.score; });
}

inline std::vector<Sentence> pooled_sentences(const Dialogue& dialogue) {
    std::vector<Sentence> pooled;
    for (const auto& turn : dialogue.turns()) {
        auto s = segment_turn(turn);
        pooled.insert(pooled.end(), s.begin(), s.end());
    }
    return pooled;
}

}  // namespace detail

/// One gain per turn from n + 1 prefix scores; each prefix score is shared by
/// the two adjacent gains.
template <ScorerLike S>
std::vector<TurnGain> turn_gains(const Dialogue& dialogue, const TargetResponse& target,
                                 S& scorer) {
    if (dialogue.empty()) {
        throw Error(Errc::InvalidArgument, "turn gains need at least one turn");
    }
    std::vector<double> prefix(static_cast<std::size_t>(dialogue.size()) + 1);
    for (int i = 0; i <= dialogue.size(); ++i) {
        prefix[static_cast<std::size_t>(i)] =
            detail::likelihood(scorer, serialize_prefix(dialogue, i), target);
    }
    std::vector<TurnGain> gains;
    gains.reserve(static_cast<std::size_t>(dialogue.size()));
    for (int i = 1; i <= dialogue.size(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        gains.push_back({i, prefix[k] - prefix[k - 1]});
    }
    return gains;
}

/// Turn index of the largest gain; the earliest turn wins ties.
inline int select_turn(std::span<const TurnGain> gains) {
    if (gains.empty()) throw Error(Errc::InvalidArgument, "cannot select a turn from no gains");
    const TurnGain* best = &gains.front();
    for (const auto& g : gains) {
        if (g.gain > best->gain) best = &g;
    }
    return best->turn_index;
}

/// Drop, hold and phi for each sentence of one teacher context, in input
/// order. Issues 2n + 1 scorer calls: U once, then U \ s_j and s_j alone for
/// each j. A single sentence ablates to the bare continuation cue.
template <ScorerLike S>
std::vector<SentenceScore> phi_scores(std::span<const Sentence> sentences,
                                      const TargetResponse& target, S& scorer) {
    if (sentences.empty()) throw Error(Errc::InvalidArgument, "phi scores need sentences");
    const double full = detail::likelihood(scorer, detail::join_teacher_context(sentences), target);
    std::vector<SentenceScore> out;
    out.reserve(sentences.size());
    for (std::size_t j = 0; j < sentences.size(); ++j) {
        const double without =
            detail::likelihood(scorer, detail::join_teacher_context(sentences, j), target);
        const double alone = detail::likelihood(
            scorer, detail::join_teacher_context(sentences.subspan(j, 1)), target);
        SentenceScore s;
        s.sentence = sentences[j];
        s.drop = full - without;
        s.hold = alone - full;
        s.phi = s.drop + s.hold;
        s.score = s.phi;
        out.push_back(std::move(s));
    }
    return out;
}

template <ScorerLike S>
AttributionResult attribute_hierarchical(const Dialogue& dialogue, const TargetResponse& target,
                                         S& scorer) {
    auto gains = turn_gains(dialogue, target, scorer);

    // Best turn first, then fall back through the remaining turns by gain
    // when the chosen turn has no teacher sentences.
    std::vector<TurnGain> order(gains);
    std::stable_sort(order.begin(), order.end(),
                     [](const TurnGain& a, const TurnGain& b) { return a.gain > b.gain; });
    std::vector<Sentence> sentences;
    std::optional<int> chosen;
    for (std::size_t k = 0; k < order.size() && !chosen; ++k) {
        const int candidate =
            k == 0 ? select_turn(std::span<const TurnGain>(gains)) : order[k].turn_index;
        sentences = segment_turn(dialogue.turn(candidate));
        if (!sentences.empty()) chosen = candidate;
    }
    if (!chosen) {
        throw Error(Errc::NoEvidence, "dialogue '" + dialogue.id() + "' has no teacher sentences");
    }

    AttributionResult result;
    result.method = Method::Hierarchical;
    result.selected_turn = chosen;
    result.ranked = phi_scores(std::span<const Sentence>(sentences), target, scorer);
    detail::rank_descending(result.ranked);
    result.evidence = result.ranked.front().sentence;
    result.turn_gains = std::move(gains);
    return result;
}

template <ScorerLike S>
AttributionResult attribute_flat(const Dialogue& dialogue, const TargetResponse& target, S& scorer,
                                 Method variant) {
    if (variant != Method::FlatDropHold && variant != Method::FlatLOO) {
        throw Error(Errc::InvalidArgument, "flat attribution takes drop-hold or loo");
    }
    const auto pooled = detail::pooled_sentences(dialogue);
    if (pooled.empty()) {
        throw Error(Errc::NoEvidence, "dialogue '" + dialogue.id() + "' has no teacher sentences");
    }
    AttributionResult result;
    result.method = variant;
    result.ranked = phi_scores(std::span<const Sentence>(pooled), target, scorer);
    if (variant == Method::FlatLOO) {
        for (auto& s : result.ranked) s.score = s.drop;
    }
    detail::rank_descending(result.ranked);
    result.evidence = result.ranked.front().sentence;
    return result;
}

/// TF-IDF cosine between each teacher sentence and the target over the
/// corpus {sentences of this dialogue, target}. No scorer calls.
inline AttributionResult attribute_similarity(const Dialogue& dialogue,
                                              const TargetResponse& target) {
    const auto pooled = detail::pooled_sentences(dialogue);
    if (pooled.empty()) {
        throw Error(Errc::NoEvidence, "dialogue '" + dialogue.id() + "' has no teacher sentences");
    }
    std::vector<std::vector<std::string>> docs;
    docs.reserve(pooled.size());
    for (const auto& s : pooled) docs.push_back(tokenize(s.text));
    const auto sims = tfidf_cosine(docs, tokenize(target.text()));

    AttributionResult result;
    result.method = Method::Similarity;
    for (std::size_t j = 0; j < pooled.size(); ++j) {
        SentenceScore s;
        s.sentence = pooled[j];
        s.score = sims[j];
        result.ranked.push_back(std::move(s));
    }
    detail::rank_descending(result.ranked);
    result.evidence = result.ranked.front().sentence;
    return result;
}

template <ScorerLike S>
AttributionResult attribute(const Dialogue& dialogue, const TargetResponse& target, Method method,
                            S& scorer) {
    switch (method) {
        case Method::Hierarchical: return attribute_hierarchical(dialogue, target, scorer);
        case Method::FlatDropHold:
        case Method::FlatLOO: return attribute_flat(dialogue, target, scorer, method);
        case Method::Similarity: return attribute_similarity(dialogue, target);
    }
    throw Error(Errc::InvalidArgument, "unknown attribution method");
}

}  // namespace attrib
