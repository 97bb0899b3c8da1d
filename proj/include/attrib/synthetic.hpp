#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file synthetic.hpp
 * @brief Seeded planted-evidence corpus generator.
 *
 * Each case: a 3-token target drawn from the strategy vocabulary; 2-4
 * teacher sentences per turn built from a disjoint distractor vocabulary;
 * exactly one planted sentence carrying 2 or 3 target tokens in a uniformly
 * chosen turn (the gold). In Hard mode every other teacher sentence carries
 * exactly one target token with probability 0.2. Assistant replies use a
 * third disjoint vocabulary; the final turn is left unanswered.
 *
 * Sampling draws raw 64-bit words from std::mt19937_64 (whose output
 * sequence is fixed by the standard) so corpora are identical across
 * standard library implementations.
 */

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "evaluation.hpp"

namespace attrib {

enum class NoiseLevel { Clean, Hard };

namespace synthetic {

inline constexpr std::array<std::string_view, 24> kTargetVocab = {
    "praise",    "reward",      "routine",    "feedback",  "mentor",     "counseling",
    "schedule",  "checklist",   "contract",   "modeling",  "calm",       "breathing",
    "pairing",   "tokens",      "encouragement", "structure", "visual",  "cues",
    "boundaries", "reflection", "mediation",  "journaling", "recognition", "coaching"};

inline constexpr std::array<std::string_view, 48> kDistractorVocab = {
    "student",  "lunch",    "weather",  "bus",      "morning",   "library",  "math",
    "desk",     "window",   "hallway",  "sister",   "brother",   "uncle",    "soccer",
    "music",    "drawing",  "notebook", "pencil",   "playground", "monday",  "friday",
    "grandma",  "kitchen",  "bicycle",  "garden",   "science",   "reading",  "recess",
    "cafeteria", "jacket",  "backpack", "weekend",  "cousin",    "puppy",    "river",
    "painting", "history",  "spelling", "afternoon", "classroom", "neighbor", "piano",
    "sandwich", "winter",   "summer",   "village",  "grades",    "story"};

inline constexpr std::array<std::string_view, 6> kAssistantPrompts = {
    "Could you tell me more about his", "How often does this happen around the",
    "What do you notice about the",     "Can you describe the situation with the",
    "When did you first see this near the", "Who else is involved with the"};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, n) by rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

    bool chance(double p) {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

inline std::string sentence_from_words(std::vector<std::string> words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out.push_back(' ');
        out += words[i];
    }
    if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
    out.push_back('.');
    return out;
}

inline std::vector<std::string> distractor_words(Rng& rng, int count) {
    std::vector<std::string> words;
    for (int i = 0; i < count; ++i) {
        words.emplace_back(kDistractorVocab[rng.below(kDistractorVocab.size())]);
    }
    return words;
}

}  // namespace synthetic

inline std::vector<BenchmarkCase> generate_synthetic(int n_cases, int n_turns, std::uint64_t seed,
                                                     NoiseLevel noise) {
    using namespace synthetic;
    if (n_cases < 1) throw Error(Errc::InvalidArgument, "synthetic corpus needs n_cases >= 1");
    if (n_turns < 2) throw Error(Errc::InvalidArgument, "synthetic corpus needs n_turns >= 2");

    Rng rng(seed);
    std::vector<BenchmarkCase> cases;
    cases.reserve(static_cast<std::size_t>(n_cases));
    for (int c = 0; c < n_cases; ++c) {
        std::vector<std::string> pool(kTargetVocab.begin(), kTargetVocab.end());
        rng.shuffle(pool);
        const std::vector<std::string> target_tokens(pool.begin(), pool.begin() + 3);

        const int planted_turn = rng.between(1, n_turns);
        std::string id = "syn-" + std::to_string(seed) + "-" + std::to_string(c + 1);
        Dialogue dialogue(id);
        GoldRef gold;
        for (int t = 1; t <= n_turns; ++t) {
            const int n_sent = rng.between(2, 4);
            const int planted_pos = t == planted_turn ? rng.between(1, n_sent) : 0;
            std::string teacher;
            for (int s = 1; s <= n_sent; ++s) {
                std::vector<std::string> words;
                if (s == planted_pos) {
                    std::vector<std::string> picks(target_tokens);
                    rng.shuffle(picks);
                    picks.resize(static_cast<std::size_t>(rng.between(2, 3)));
                    words = distractor_words(rng, rng.between(2, 4));
                    words.insert(words.end(), picks.begin(), picks.end());
                    rng.shuffle(words);
                    gold = GoldRef{t, s};
                } else {
                    words = distractor_words(rng, rng.between(4, 7));
                    if (noise == NoiseLevel::Hard && rng.chance(0.2)) {
                        words[rng.below(words.size())] = target_tokens[rng.below(3)];
                    }
                }
                if (!teacher.empty()) teacher.push_back(' ');
                teacher += sentence_from_words(std::move(words));
            }
            std::string assistant;
            if (t < n_turns) {
                assistant = std::string(kAssistantPrompts[rng.below(kAssistantPrompts.size())]) +
                            " " + std::string(kDistractorVocab[rng.below(kDistractorVocab.size())]) +
                            "?";
            }
            dialogue.append(std::move(teacher), std::move(assistant));
        }
        std::string target = target_tokens[0] + " " + target_tokens[1] + " " + target_tokens[2];
        cases.push_back(BenchmarkCase{std::move(id), std::move(dialogue),
                                      TargetResponse(std::move(target)), {gold}});
    }
    return cases;
}

}  // namespace attrib
