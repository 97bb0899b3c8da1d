#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "scoring.hpp"

namespace attrib {

/// Cosine similarity between TF-IDF vectors of each document and the query.
/// The query itself is part of the corpus. Weights are raw term frequency
/// times smoothed idf, ln((1 + D) / (1 + df)) + 1. A zero vector on either
/// side gives similarity 0.
inline std::vector<double> tfidf_cosine(const std::vector<std::vector<std::string>>& documents,
                                        const std::vector<std::string>& query) {
    const double n_docs = static_cast<double>(documents.size() + 1);
    std::map<std::string, double> df;
    auto count_df = [&](const std::vector<std::string>& doc) {
        std::map<std::string, bool> seen;
        for (const auto& t : doc) {
            if (!seen[t]) {
                seen[t] = true;
                df[t] += 1.0;
            }
        }
    };
    for (const auto& doc : documents) count_df(doc);
    count_df(query);

    auto weights = [&](const std::vector<std::string>& doc) {
        std::map<std::string, double> tf;
        for (const auto& t : doc) tf[t] += 1.0;
        for (auto& [t, w] : tf) w *= std::log((1.0 + n_docs) / (1.0 + df[t])) + 1.0;
        return tf;
    };
    auto norm = [](const std::map<std::string, double>& v) {
        double s = 0.0;
        for (const auto& [_, w] : v) s += w * w;
        return std::sqrt(s);
    };

    const auto q = weights(query);
    const double q_norm = norm(q);
    std::vector<double> out;
    out.reserve(documents.size());
    for (const auto& doc : documents) {
        const auto d = weights(doc);
        const double d_norm = norm(d);
        if (q_norm == 0.0 || d_norm == 0.0) {
            out.push_back(0.0);
            continue;
        }
        double dot = 0.0;
        for (const auto& [t, w] : d) {
            const auto it = q.find(t);
            if (it != q.end()) dot += w * it->second;
        }
        out.push_back(dot / (d_norm * q_norm));
    }
    return out;
}

}  // namespace attrib
