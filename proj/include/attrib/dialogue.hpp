#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file dialogue.hpp
 * @brief Dialogue value types, sentence segmentation and the canonical text
 *        framing shared by every scoring call.
 *
 * Framing contract (the scorer only ever sees these strings):
 *
 *   prefix(d, i)        "Teacher: t1\nAssistant: a1\n...Teacher: ti\nAssistant: ai\nAssistant:"
 *   teacher context     "Teacher: s1 s2 ... sn\nAssistant:"
 *   empty context       "Assistant:"
 *
 * Assistant lines are omitted when the reply is empty. The trailing bare
 * "Assistant:" line is the continuation cue and is never absent, so no
 * context is ever the empty string.
 */

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "utf8.hpp"

namespace attrib {

inline constexpr std::string_view kTeacherLabel = "Teacher:";
inline constexpr std::string_view kAssistantLabel = "Assistant:";
inline constexpr std::string_view kContinuationCue = "Assistant:";

enum class Role { Teacher, Assistant };

inline const char* role_name(Role role) {
    return role == Role::Teacher ? "teacher" : "assistant";
}

struct Turn {
    int index = 1;
    std::string teacher_text;
    std::string assistant_text;

    friend bool operator==(const Turn&, const Turn&) = default;
};

/// Half-open code point range into a turn's teacher text.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - start; }
    friend bool operator==(const Span&, const Span&) = default;
};

struct Sentence {
    int turn_index = 0;
    int sentence_index = 1;
    std::string text;
    Span span;

    friend bool operator==(const Sentence&, const Sentence&) = default;
};

/// The recommended strategy whose supporting evidence is sought.
class TargetResponse {
public:
    explicit TargetResponse(std::string text) : text_(std::move(text)) {
        if (text_.empty()) {
            throw Error(Errc::InvalidArgument, "target response must be non-empty");
        }
    }

    const std::string& text() const { return text_; }
    friend bool operator==(const TargetResponse&, const TargetResponse&) = default;

private:
    std::string text_;
};

/// Ordered turns with contiguous 1-based indices. A freshly created service
/// session holds zero turns; everything that attributes requires at least one.
class Dialogue {
public:
    Dialogue() = default;
    explicit Dialogue(std::string id) : id_(std::move(id)) {}

    static Dialogue from_pairs(std::string id,
                               const std::vector<std::pair<std::string, std::string>>& pairs) {
        Dialogue d(std::move(id));
        for (const auto& [teacher, assistant] : pairs) d.append(teacher, assistant);
        return d;
    }

    const std::string& id() const { return id_; }
    const std::vector<Turn>& turns() const { return turns_; }
    int size() const { return static_cast<int>(turns_.size()); }
    bool empty() const { return turns_.empty(); }

    const Turn& turn(int index) const {
        if (index < 1 || index > size()) {
            throw Error(Errc::OutOfRange, "turn index " + std::to_string(index) +
                                              " outside 1.." + std::to_string(size()));
        }
        return turns_[static_cast<std::size_t>(index - 1)];
    }

    const Turn& append(std::string teacher_text, std::string assistant_text) {
        turns_.push_back(Turn{size() + 1, std::move(teacher_text), std::move(assistant_text)});
        return turns_.back();
    }

    friend bool operator==(const Dialogue&, const Dialogue&) = default;

private:
    std::string id_;
    std::vector<Turn> turns_;
};

namespace detail {

inline bool is_cjk_terminal(char32_t cp) {
    return cp == U'。' || cp == U'！' || cp == U'？';
}

inline bool is_ascii_terminal(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?'; }

inline bool is_terminal(char32_t cp) { return is_ascii_terminal(cp) || is_cjk_terminal(cp); }

inline bool is_closer(char32_t cp) {
    switch (cp) {
        case U'"': case U'\'': case U')': case U']':
        case U'”': case U'’': case U'」': case U'』': case U'）':
            return true;
        default:
            return false;
    }
}

}  // namespace detail

/**
 * Rule-based split on terminal punctuation (. ! ? and the full-width
 * 。！？). A run of terminators plus any closing quotes/brackets stays with
 * its sentence. ASCII terminators only close a sentence when followed by
 * whitespace or end of text, so "3.5" and "e.g" stay intact; CJK marks close
 * unconditionally. Spans are tight: `text` is exactly the code points at
 * `span`, with surrounding whitespace excluded.
 */
inline std::vector<Sentence> segment_sentences(std::string_view text, int turn_index = 0) {
    const auto cps = utf8::decode(text);
    const std::size_t n = cps.size();
    std::vector<Sentence> out;

    auto emit = [&](std::size_t begin, std::size_t end) {
        while (begin < end && utf8::is_space(cps[begin].value)) ++begin;
        while (end > begin && utf8::is_space(cps[end - 1].value)) --end;
        if (begin == end) return;
        const auto byte_begin = cps[begin].byte_offset;
        const auto byte_end = cps[end - 1].byte_offset + cps[end - 1].byte_length;
        out.push_back(Sentence{turn_index, static_cast<int>(out.size()) + 1,
                               std::string(text.substr(byte_begin, byte_end - byte_begin)),
                               Span{begin, end}});
    };

    std::size_t start = 0;
    std::size_t i = 0;
    while (i < n) {
        if (!detail::is_terminal(cps[i].value)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        bool cjk = false;
        while (j < n && detail::is_terminal(cps[j].value)) {
            cjk = cjk || detail::is_cjk_terminal(cps[j].value);
            ++j;
        }
        while (j < n && detail::is_closer(cps[j].value)) ++j;
        if (cjk || j == n || utf8::is_space(cps[j].value)) {
            emit(start, j);
            start = j;
        }
        i = j;
    }
    emit(start, n);
    return out;
}

inline std::vector<Sentence> segment_turn(const Turn& turn) {
    return segment_sentences(turn.teacher_text, turn.index);
}

/// Turns 1..reply_turn with that turn's assistant reply removed: the context
/// the reply was generated from.
inline Dialogue context_before_reply(const Dialogue& dialogue, int reply_turn) {
    if (reply_turn < 1 || reply_turn > dialogue.size()) {
        throw Error(Errc::OutOfRange, "reply turn " + std::to_string(reply_turn) + " out of range");
    }
    Dialogue out(dialogue.id());
    for (int i = 1; i <= reply_turn; ++i) {
        const auto& t = dialogue.turn(i);
        out.append(t.teacher_text, i == reply_turn ? std::string() : t.assistant_text);
    }
    return out;
}

/// The dialogue a target is attributed against: when the target is one of
/// the assistant replies (latest match wins), the turns that produced it;
/// otherwise the whole dialogue.
inline Dialogue attribution_context(const Dialogue& dialogue, std::string_view target) {
    for (int i = dialogue.size(); i >= 1; --i) {
        if (dialogue.turn(i).assistant_text == target) return context_before_reply(dialogue, i);
    }
    return dialogue;
}

/// Canonical prefix C_i: turns 1..upto_turn followed by the continuation cue.
inline std::string serialize_prefix(const Dialogue& dialogue, int upto_turn) {
    if (upto_turn < 0 || upto_turn > dialogue.size()) {
        throw Error(Errc::OutOfRange, "prefix length " + std::to_string(upto_turn) +
                                          " outside 0.." + std::to_string(dialogue.size()));
    }
    std::string out;
    for (int k = 1; k <= upto_turn; ++k) {
        const Turn& t = dialogue.turn(k);
        out.append(kTeacherLabel).append(" ").append(t.teacher_text).append("\n");
        if (!t.assistant_text.empty()) {
            out.append(kAssistantLabel).append(" ").append(t.assistant_text).append("\n");
        }
    }
    out.append(kContinuationCue);
    return out;
}

namespace detail {

/// Teacher framing over an arbitrary sentence list; `skip` is a position,
/// not a sentence index, so pooled multi-turn lists work too.
inline std::string join_teacher_context(std::span<const Sentence> sentences,
                                        std::optional<std::size_t> skip = std::nullopt) {
    std::string body;
    bool first = true;
    for (std::size_t pos = 0; pos < sentences.size(); ++pos) {
        if (skip && *skip == pos) continue;
        if (!first) body.push_back(' ');
        body.append(sentences[pos].text);
        first = false;
    }
    if (first) return std::string(kContinuationCue);
    std::string out;
    out.reserve(body.size() + 24);
    out.append(kTeacherLabel).append(" ").append(body).append("\n").append(kContinuationCue);
    return out;
}

}  // namespace detail

/// Teacher-only context U for one turn, optionally with one sentence spliced
/// out. Omitting every sentence yields the bare continuation cue.
inline std::string serialize_teacher_context(std::span<const Sentence> sentences,
                                             std::optional<int> omit = std::nullopt) {
    for (const auto& s : sentences) {
        if (s.turn_index != sentences.front().turn_index) {
            throw Error(Errc::InvalidArgument, "teacher context sentences span several turns");
        }
    }
    std::optional<std::size_t> skip;
    if (omit) {
        for (std::size_t pos = 0; pos < sentences.size(); ++pos) {
            if (sentences[pos].sentence_index == *omit) {
                skip = pos;
                break;
            }
        }
        if (!skip) {
            throw Error(Errc::NotFound, "sentence " + std::to_string(*omit) + " not in context");
        }
    }
    return detail::join_teacher_context(sentences, skip);
}

}  // namespace attrib
