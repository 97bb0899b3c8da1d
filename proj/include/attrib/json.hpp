#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file json.hpp
 * @brief nlohmann::json mappings for the wire/file formats.
 *
 * Dialogue file:  {"id": s, "turns": [{"teacher": s, "assistant": s}]}
 * Attribution:    scores in nats, spans in code points (start_char, end_char)
 */

#include <string>
#include <vector>

#include <json.hpp>

#include "attribution.hpp"
#include "dialogue.hpp"
#include "error.hpp"

namespace attrib {

using nlohmann::json;

inline json dialogue_to_json(const Dialogue& d) {
    json turns = json::array();
    for (const auto& t : d.turns()) {
        turns.push_back({{"teacher", t.teacher_text}, {"assistant", t.assistant_text}});
    }
    return {{"id", d.id()}, {"turns", std::move(turns)}};
}

inline Dialogue dialogue_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::InvalidArgument, "dialogue must be a JSON object");
    try {
        Dialogue d(j.value("id", std::string()));
        for (const auto& t : j.at("turns")) {
            d.append(t.at("teacher").get<std::string>(), t.value("assistant", std::string()));
        }
        return d;
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("malformed dialogue: ") + e.what());
    }
}

inline json sentence_to_json(const Sentence& s) {
    return {{"turn_index", s.turn_index},   {"sentence_index", s.sentence_index},
            {"text", s.text},               {"start_char", s.span.start},
            {"end_char", s.span.end}};
}

inline Sentence sentence_from_json(const json& j) {
    return Sentence{j.at("turn_index").get<int>(), j.at("sentence_index").get<int>(),
                    j.at("text").get<std::string>(),
                    Span{j.at("start_char").get<std::size_t>(), j.at("end_char").get<std::size_t>()}};
}

inline json attribution_to_json(const AttributionResult& r) {
    json ranked = json::array();
    int rank = 1;
    for (const auto& s : r.ranked) {
        json row = sentence_to_json(s.sentence);
        row["rank"] = rank++;
        row["drop"] = s.drop;
        row["hold"] = s.hold;
        row["phi"] = s.phi;
        row["score"] = s.score;
        ranked.push_back(std::move(row));
    }
    json gains = nullptr;
    if (r.turn_gains) {
        gains = json::array();
        for (const auto& g : *r.turn_gains) gains.push_back({{"turn_index", g.turn_index}, {"gain", g.gain}});
    }
    return {{"method", method_name(r.method)},
            {"selected_turn", r.selected_turn ? json(*r.selected_turn) : json(nullptr)},
            {"turn_gains", std::move(gains)},
            {"evidence", sentence_to_json(r.evidence)},
            {"ranked", std::move(ranked)}};
}

inline AttributionResult attribution_from_json(const json& j) {
    AttributionResult r;
    r.method = parse_method(j.at("method").get<std::string>());
    if (!j.at("selected_turn").is_null()) r.selected_turn = j["selected_turn"].get<int>();
    if (!j.at("turn_gains").is_null()) {
        std::vector<TurnGain> gains;
        for (const auto& g : j["turn_gains"]) {
            gains.push_back({g.at("turn_index").get<int>(), g.at("gain").get<double>()});
        }
        r.turn_gains = std::move(gains);
    }
    r.evidence = sentence_from_json(j.at("evidence"));
    for (const auto& row : j.at("ranked")) {
        SentenceScore s;
        s.sentence = sentence_from_json(row);
        s.drop = row.at("drop").get<double>();
        s.hold = row.at("hold").get<double>();
        s.phi = row.at("phi").get<double>();
        s.score = row.at("score").get<double>();
        r.ranked.push_back(std::move(s));
    }
    return r;
}

}  // namespace attrib
