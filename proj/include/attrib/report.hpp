#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include <cstdio>
#include <string>
#include <vector>

#include "attribution.hpp"
#include "evaluation.hpp"
#include "json.hpp"

namespace attrib {

inline std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline std::string pad_right(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

inline std::string pad_left(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

/// Method / Hit@1 / Hit@3 / Hit@5 / MRR table, three decimals.
inline std::string format_metrics_table(const std::vector<MetricsReport>& rows) {
    std::string out;
    out += "# candidates: each method's own ranked set; hit if any gold sentence is in the top k;\n";
    out += "# MRR over the best-ranked gold sentence (0 when absent)\n";
    std::size_t width = 6;
    for (const auto& r : rows) width = std::max(width, r.method.size());
    width += 2;
    out += pad_right("Method", width) + pad_left("Hit@1", 7) + pad_left("Hit@3", 7) +
           pad_left("Hit@5", 7) + pad_left("MRR", 7) + pad_left("N", 6) + "\n";
    for (const auto& r : rows) {
        out += pad_right(r.method, width) + pad_left(fixed3(r.hit1), 7) + pad_left(fixed3(r.hit3), 7) +
               pad_left(fixed3(r.hit5), 7) + pad_left(fixed3(r.mrr), 7) +
               pad_left(std::to_string(r.n_cases), 6) + "\n";
    }
    return out;
}

inline json metrics_to_json(const MetricsReport& r) {
    return {{"method", r.method}, {"n_cases", r.n_cases}, {"hit1", r.hit1},
            {"hit3", r.hit3},     {"hit5", r.hit5},       {"mrr", r.mrr}};
}

inline json metrics_list_to_json(const std::vector<MetricsReport>& rows) {
    json reports = json::array();
    for (const auto& r : rows) reports.push_back(metrics_to_json(r));
    return {{"multi_gold", "any-gold-in-top-k; mrr-uses-best-gold"},
            {"candidates", "method-own-ranked-set"},
            {"reports", std::move(reports)}};
}

/// Human-readable attribution summary.
inline std::string format_attribution(const AttributionResult& r) {
    std::string out = "method: " + std::string(method_name(r.method)) + "\n";
    if (r.selected_turn) out += "selected turn: " + std::to_string(*r.selected_turn) + "\n";
    if (r.turn_gains) {
        out += "turn gains:\n";
        for (const auto& g : *r.turn_gains) {
            out += "  turn " + std::to_string(g.turn_index) + ": " + fixed3(g.gain) + "\n";
        }
    }
    out += "evidence: [turn " + std::to_string(r.evidence.turn_index) + ", sentence " +
           std::to_string(r.evidence.sentence_index) + ", chars " +
           std::to_string(r.evidence.span.start) + "-" + std::to_string(r.evidence.span.end) + "] " +
           r.evidence.text + "\n";
    out += pad_left("Rank", 4) + pad_left("Turn", 6) + pad_left("Sent", 6) + pad_left("Score", 9) +
           pad_left("Drop", 9) + pad_left("Hold", 9) + "  Text\n";
    int rank = 1;
    for (const auto& s : r.ranked) {
        out += pad_left(std::to_string(rank++), 4) + pad_left(std::to_string(s.sentence.turn_index), 6) +
               pad_left(std::to_string(s.sentence.sentence_index), 6) + pad_left(fixed3(s.score), 9) +
               pad_left(fixed3(s.drop), 9) + pad_left(fixed3(s.hold), 9) + "  " + s.sentence.text + "\n";
    }
    return out;
}

}  // namespace attrib
