// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "attrib/dialogue.hpp"
#include "attrib/json.hpp"

using namespace attrib;

namespace {

Dialogue one_turn() { return Dialogue::from_pairs("d1", {{"He hits peers.", "Tell me more."}}); }

}  // namespace

TEST(Segment, TwoSentencesWithSpans) {
    // "He hits classmates." is 19 characters; the second sentence starts
    // after one space at 20 and is 18 characters long.
    const auto s = segment_sentences("He hits classmates. He skips homework.");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].text, "He hits classmates.");
    EXPECT_EQ(s[0].span, (Span{0, 19}));
    EXPECT_EQ(s[1].text, "He skips homework.");
    EXPECT_EQ(s[1].span, (Span{20, 38}));
    EXPECT_EQ(s[0].sentence_index, 1);
    EXPECT_EQ(s[1].sentence_index, 2);
}

TEST(Segment, NoTerminalPunctuationIsOneSentence) {
    const auto s = segment_sentences("He responds well to praise");
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].span, (Span{0, 26}));
}

TEST(Segment, EmptyAndWhitespace) {
    EXPECT_TRUE(segment_sentences("").empty());
    EXPECT_TRUE(segment_sentences("  \n\t ").empty());
}

TEST(Segment, TrimsAndKeepsTrailingFragment) {
    const auto s = segment_sentences("  Hi there!  What now? trailing bit ");
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0].text, "Hi there!");
    EXPECT_EQ(s[0].span, (Span{2, 11}));
    EXPECT_EQ(s[1].text, "What now?");
    EXPECT_EQ(s[2].text, "trailing bit");
}

TEST(Segment, PunctuationRunsAndClosers) {
    const auto s = segment_sentences("Really?! He said \"stop.\" Then left...");
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0].text, "Really?!");
    EXPECT_EQ(s[1].text, "He said \"stop.\"");
    EXPECT_EQ(s[2].text, "Then left...");
}

TEST(Segment, DecimalPointDoesNotSplit) {
    const auto s = segment_sentences("He sleeps 6.5 hours. Fine.");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].text, "He sleeps 6.5 hours.");
}

TEST(Segment, CjkMarksSplitWithCodePointSpans) {
    const auto s = segment_sentences("他打同学。他不写作业！好吗？");
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0].text, "他打同学。");
    EXPECT_EQ(s[0].span, (Span{0, 5}));
    EXPECT_EQ(s[1].span, (Span{5, 11}));
    EXPECT_EQ(s[2].span, (Span{11, 14}));
}

TEST(Segment, RoundTripProperty) {
    // Reassembling the sentences with the original characters between spans
    // reproduces the trimmed source.
    std::mt19937 rng(11);
    const std::string alphabet = "ab c.!?  \n";
    for (int iter = 0; iter < 500; ++iter) {
        std::string text;
        const int len = static_cast<int>(rng() % 40);
        for (int i = 0; i < len; ++i) text.push_back(alphabet[rng() % alphabet.size()]);
        const auto sents = segment_sentences(text);
        const auto b = text.find_first_not_of(" \n");
        if (b == std::string::npos) {
            EXPECT_TRUE(sents.empty());
            continue;
        }
        const auto e = text.find_last_not_of(" \n");
        const std::string trimmed = text.substr(b, e - b + 1);
        std::string rebuilt;
        for (std::size_t k = 0; k < sents.size(); ++k) {
            EXPECT_EQ(std::string(utf8::substr(text, sents[k].span.start, sents[k].span.end)), sents[k].text);
            if (k > 0) {
                EXPECT_LE(sents[k - 1].span.end, sents[k].span.start);
                rebuilt += utf8::substr(text, sents[k - 1].span.end, sents[k].span.start);
            }
            rebuilt += sents[k].text;
        }
        EXPECT_EQ(rebuilt, trimmed) << "input: [" << text << "]";
    }
}

TEST(SerializePrefix, OneTurnTemplate) {
    EXPECT_EQ(serialize_prefix(one_turn(), 1),
              "Teacher: He hits peers.\nAssistant: Tell me more.\nAssistant:");
}

TEST(SerializePrefix, EmptyPrefixIsCue) {
    EXPECT_EQ(serialize_prefix(one_turn(), 0), "Assistant:");
}

TEST(SerializePrefix, LaterTurnsDoNotAffectPrefix) {
    auto two = one_turn();
    two.append("He skips class.", "");
    EXPECT_EQ(serialize_prefix(two, 1), serialize_prefix(one_turn(), 1));
    EXPECT_EQ(serialize_prefix(two, 2),
              "Teacher: He hits peers.\nAssistant: Tell me more.\nTeacher: He skips class.\nAssistant:");
}

TEST(SerializePrefix, OutOfRange) {
    try {
        serialize_prefix(one_turn(), 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OutOfRange);
    }
    EXPECT_THROW(serialize_prefix(one_turn(), -1), Error);
}

TEST(SerializePrefix, StrictPrefixProperty) {
    Dialogue d("p");
    d.append("A one. A two.", "Q1?");
    d.append("B one.", "");
    d.append("C one! C two?", "Q3?");
    for (int i = 0; i < d.size(); ++i) {
        auto shorter = serialize_prefix(d, i);
        shorter.resize(shorter.size() - kContinuationCue.size());
        const auto longer = serialize_prefix(d, i + 1);
        EXPECT_LT(shorter.size(), longer.size());
        EXPECT_EQ(longer.compare(0, shorter.size(), shorter), 0);
    }
}

TEST(SerializeTeacherContext, Templates) {
    const std::vector<Sentence> s = {{1, 1, "A.", {0, 2}}, {1, 2, "B.", {3, 5}}};
    EXPECT_EQ(serialize_teacher_context(s), "Teacher: A. B.\nAssistant:");
    EXPECT_EQ(serialize_teacher_context(s, 2), "Teacher: A.\nAssistant:");
    const std::vector<Sentence> one = {{1, 1, "A.", {0, 2}}};
    EXPECT_EQ(serialize_teacher_context(one, 1), "Assistant:");
    EXPECT_EQ(serialize_teacher_context(std::vector<Sentence>{}), "Assistant:");
}

TEST(SerializeTeacherContext, Errors) {
    const std::vector<Sentence> s = {{1, 1, "A.", {0, 2}}, {1, 2, "B.", {3, 5}}};
    try {
        serialize_teacher_context(s, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotFound);
    }
    const std::vector<Sentence> mixed = {{1, 1, "A.", {0, 2}}, {2, 1, "B.", {0, 2}}};
    EXPECT_THROW(serialize_teacher_context(mixed), Error);
}

TEST(SerializeTeacherContext, AblationRemovesOnlyTheSentence) {
    const auto sents = segment_sentences("First one. Second one. Third one. Fourth.", 1);
    const auto full = serialize_teacher_context(sents);
    for (const auto& s : sents) {
        const auto ablated = serialize_teacher_context(sents, s.sentence_index);
        EXPECT_EQ(full.size() - ablated.size(), s.text.size() + 1);
        // Re-inserting the text and one space at the right place restores it.
        const auto pos = full.find(s.text);
        std::string restored = ablated;
        if (s.sentence_index == 1) {
            restored.insert(pos, s.text + " ");
        } else {
            restored.insert(pos - 1, " " + s.text);
        }
        EXPECT_EQ(restored, full);
    }
    EXPECT_EQ(serialize_teacher_context(sents), full);
}

TEST(DialogueJson, ReadsFileFormat) {
    const auto j = json::parse(R"({"id": "x", "turns": [{"teacher": "Hi.", "assistant": "Yes?"},
                                                          {"teacher": "More.", "assistant": ""}]})");
    const auto d = dialogue_from_json(j);
    EXPECT_EQ(d.id(), "x");
    ASSERT_EQ(d.size(), 2);
    EXPECT_EQ(d.turn(2).index, 2);
    EXPECT_EQ(d.turn(2).assistant_text, "");
    EXPECT_EQ(dialogue_from_json(dialogue_to_json(d)), d);
    EXPECT_THROW(dialogue_from_json(json::parse(R"({"turns": [{"assistant": "x"}]})")), Error);
}

TEST(TargetResponse, RejectsEmpty) { EXPECT_THROW(TargetResponse(""), Error); }

TEST(Dialogue, ContextBeforeReply) {
    const auto d = Dialogue::from_pairs("c", {{"A.", "x"}, {"B.", "y"}, {"C.", "z"}});
    const auto c = context_before_reply(d, 2);
    ASSERT_EQ(c.size(), 2);
    EXPECT_EQ(c.turn(1).assistant_text, "x");
    EXPECT_EQ(c.turn(2).teacher_text, "B.");
    EXPECT_TRUE(c.turn(2).assistant_text.empty());
    EXPECT_EQ(serialize_prefix(c, 2), "Teacher: A.\nAssistant: x\nTeacher: B.\nAssistant:");
    EXPECT_THROW(context_before_reply(d, 4), Error);
    EXPECT_THROW(context_before_reply(d, 0), Error);
}

TEST(Dialogue, AttributionContextDropsMatchedReply) {
    const auto d = Dialogue::from_pairs("c", {{"A.", "x"}, {"B.", "y"}, {"C.", ""}});
    EXPECT_EQ(attribution_context(d, "y").size(), 2);
    EXPECT_TRUE(attribution_context(d, "y").turn(2).assistant_text.empty());
    EXPECT_EQ(attribution_context(d, "unrelated").size(), 3);
    EXPECT_EQ(attribution_context(d, "x").size(), 1);
}
