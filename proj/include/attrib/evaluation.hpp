#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file evaluation.hpp
 * @brief Ranking metrics over annotated benchmark cases and binary
 *        annotation agreement.
 *
 * Conventions:
 *  - a case is a hit@k when ANY gold sentence is within the top k;
 *  - MRR uses the best-ranked gold sentence (reciprocal rank 0 if none);
 *  - ranks are 1-based over the method's own candidate set, so for the
 *    hierarchical method gold sentences outside the selected turn never
 *    match and a wrong turn choice counts as a miss.
 */

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "attribution.hpp"
#include "dialogue.hpp"
#include "error.hpp"
#include "scoring.hpp"

namespace attrib {

struct GoldRef {
    int turn = 0;
    int sentence = 0;

    friend bool operator==(const GoldRef&, const GoldRef&) = default;
};

struct BenchmarkCase {
    std::string id;
    Dialogue dialogue;
    TargetResponse target{"-"};
    std::vector<GoldRef> gold;

    friend bool operator==(const BenchmarkCase&, const BenchmarkCase&) = default;
};

struct MetricsReport {
    std::string method;
    std::size_t n_cases = 0;
    double hit1 = 0.0;
    double hit3 = 0.0;
    double hit5 = 0.0;
    double mrr = 0.0;
};

/// Throws Errc::Corpus naming the case when a gold reference does not
/// resolve to a teacher sentence under the canonical segmenter.
inline void validate_case(const BenchmarkCase& c) {
    if (c.gold.empty()) throw Error(Errc::Corpus, "case '" + c.id + "' has no gold sentences");
    for (const auto& g : c.gold) {
        const bool turn_ok = g.turn >= 1 && g.turn <= c.dialogue.size();
        const auto n_sent = turn_ok ? segment_turn(c.dialogue.turn(g.turn)).size() : 0;
        if (!turn_ok || g.sentence < 1 || static_cast<std::size_t>(g.sentence) > n_sent) {
            throw Error(Errc::Corpus, "case '" + c.id + "': gold (turn " + std::to_string(g.turn) +
                                          ", sentence " + std::to_string(g.sentence) +
                                          ") does not resolve to a teacher sentence");
        }
    }
}

/// 1-based rank of the best-ranked gold sentence, or nullopt when no gold
/// sentence is among the candidates.
inline std::optional<std::size_t> best_gold_rank(std::span<const SentenceScore> ranked,
                                                 std::span<const GoldRef> gold) {
    for (std::size_t pos = 0; pos < ranked.size(); ++pos) {
        const auto& s = ranked[pos].sentence;
        for (const auto& g : gold) {
            if (g.turn == s.turn_index && g.sentence == s.sentence_index) return pos + 1;
        }
    }
    return std::nullopt;
}

inline MetricsReport aggregate_ranks(std::string method,
                                     std::span<const std::optional<std::size_t>> best_ranks) {
    if (best_ranks.empty()) throw Error(Errc::InvalidArgument, "no cases to aggregate");
    std::size_t h1 = 0, h3 = 0, h5 = 0;
    double rr = 0.0;
    for (const auto& r : best_ranks) {
        if (!r) continue;
        h1 += *r <= 1;
        h3 += *r <= 3;
        h5 += *r <= 5;
        rr += 1.0 / static_cast<double>(*r);
    }
    const double n = static_cast<double>(best_ranks.size());
    return MetricsReport{std::move(method), best_ranks.size(),
                         static_cast<double>(h1) / n, static_cast<double>(h3) / n,
                         static_cast<double>(h5) / n, rr / n};
}

/// Runs `method` on every case (on up to `jobs` threads) and aggregates in
/// case order, so the report does not depend on scheduling.
template <ScorerLike S>
MetricsReport evaluate(std::span<const BenchmarkCase> cases, Method method, S& scorer,
                       unsigned jobs = 1) {
    if (cases.empty()) throw Error(Errc::InvalidArgument, "evaluation needs at least one case");
    for (const auto& c : cases) validate_case(c);

    std::vector<std::optional<std::size_t>> ranks(cases.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) {
            try {
                const auto result = attribute(cases[i].dialogue, cases[i].target, method, scorer);
                ranks[i] = best_gold_rank(result.ranked, cases[i].gold);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cases.size();
            }
        }
    };
    jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(cases.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return aggregate_ranks(method_label(method), ranks);
}

struct AnnotationSet {
    std::string rater_id;
    std::vector<int> labels;
};

/// Cohen's kappa for two binary raters over the same candidate list.
inline double cohen_kappa(const AnnotationSet& a, const AnnotationSet& b) {
    if (a.labels.size() != b.labels.size()) {
        throw Error(Errc::InvalidArgument, "raters '" + a.rater_id + "' and '" + b.rater_id +
                                               "' labelled different numbers of candidates");
    }
    if (a.labels.empty()) throw Error(Errc::InvalidArgument, "kappa needs at least one label");
    std::size_t agree = 0, a_pos = 0, b_pos = 0;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        const int x = a.labels[i];
        const int y = b.labels[i];
        if ((x != 0 && x != 1) || (y != 0 && y != 1)) {
            throw Error(Errc::InvalidArgument, "kappa labels must be 0 or 1");
        }
        agree += x == y;
        a_pos += static_cast<std::size_t>(x);
        b_pos += static_cast<std::size_t>(y);
    }
    const double n = static_cast<double>(a.labels.size());
    const double p_o = static_cast<double>(agree) / n;
    const double pa = static_cast<double>(a_pos) / n;
    const double pb = static_cast<double>(b_pos) / n;
    const double p_e = pa * pb + (1.0 - pa) * (1.0 - pb);
    if (p_e == 1.0) {
        if (agree == a.labels.size()) return 1.0;
        throw Error(Errc::InvalidArgument, "kappa undefined: chance agreement is 1 with disagreements");
    }
    return (p_o - p_e) / (1.0 - p_e);
}

}  // namespace attrib
