#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include <string>
#include <string_view>

#include "chat.hpp"
#include "dialogue.hpp"
#include "error.hpp"

namespace attrib {

enum class Generator { Template, ChatBackend };

inline const char* generator_name(Generator g) {
    return g == Generator::Template ? "template" : "chat";
}

inline Generator parse_generator(std::string_view s) {
    if (s == "template") return Generator::Template;
    if (s == "chat") return Generator::ChatBackend;
    throw Error(Errc::InvalidArgument, "unknown explanation generator '" + std::string(s) + "'");
}

/// The narrative always contains evidence.text verbatim.
struct Explanation {
    std::string strategy_text;
    Sentence evidence;
    std::string narrative;
    Generator generator = Generator::Template;

    friend bool operator==(const Explanation&, const Explanation&) = default;
};

inline std::string explanation_prompt(const TargetResponse& strategy, const Sentence& evidence) {
    return "A teacher described a student. The key evidence is: \"" + evidence.text +
           "\". The recommended strategy is: \"" + strategy.text() +
           "\". In 2-3 sentences, explain to the teacher why this evidence supports this "
           "strategy. Quote the evidence verbatim.";
}

inline std::string template_narrative(const TargetResponse& strategy, const Sentence& evidence) {
    return "This strategy is recommended because you mentioned: \"" + evidence.text + "\". " +
           strategy.text();
}

inline bool is_grounded(std::string_view narrative, const Sentence& evidence) {
    return !narrative.empty() && !evidence.text.empty() &&
           narrative.find(evidence.text) != std::string_view::npos;
}

/// Chat-generated narrative when a backend is given and its answer quotes
/// the evidence; the deterministic template otherwise (including on backend
/// failure).
inline Explanation explain(const TargetResponse& strategy, const Sentence& evidence,
                           ChatBackend* backend = nullptr) {
    if (evidence.text.empty()) throw Error(Errc::InvalidArgument, "evidence sentence is empty");
    if (backend) {
        try {
            auto text = backend->complete({{Role::Teacher, explanation_prompt(strategy, evidence)}});
            if (is_grounded(text, evidence)) {
                return {strategy.text(), evidence, std::move(text), Generator::ChatBackend};
            }
        } catch (const Error& e) {
            if (e.code() != Errc::Backend && e.code() != Errc::Protocol) throw;
        }
    }
    return {strategy.text(), evidence, template_narrative(strategy, evidence), Generator::Template};
}

}  // namespace attrib
