#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

// Benchmark JSONL, one case per line:
//   {"id": s, "dialogue": {...}, "target": s, "gold": [{"turn": i, "sentence": j}]}

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "evaluation.hpp"
#include "json.hpp"

namespace attrib {

inline json case_to_json(const BenchmarkCase& c) {
    json gold = json::array();
    for (const auto& g : c.gold) gold.push_back({{"turn", g.turn}, {"sentence", g.sentence}});
    return {{"id", c.id},
            {"dialogue", dialogue_to_json(c.dialogue)},
            {"target", c.target.text()},
            {"gold", std::move(gold)}};
}

inline BenchmarkCase case_from_json(const json& j) {
    try {
        BenchmarkCase c{j.at("id").get<std::string>(), dialogue_from_json(j.at("dialogue")),
                        TargetResponse(j.at("target").get<std::string>()),
                        {}};
        for (const auto& g : j.at("gold")) {
            c.gold.push_back({g.at("turn").get<int>(), g.at("sentence").get<int>()});
        }
        return c;
    } catch (const json::exception& e) {
        throw Error(Errc::Corpus, e.what());
    }
}

inline std::vector<BenchmarkCase> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot read corpus " + path.string());
    std::vector<BenchmarkCase> cases;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto where = [&] { return path.string() + ":" + std::to_string(line_no) + ": "; };
        try {
            auto c = case_from_json(json::parse(line));
            validate_case(c);
            cases.push_back(std::move(c));
        } catch (const json::parse_error& e) {
            throw Error(Errc::Corpus, where() + "malformed JSON: " + e.what());
        } catch (const Error& e) {
            throw Error(Errc::Corpus, where() + e.what());
        }
    }
    return cases;
}

inline void save_corpus(const std::vector<BenchmarkCase>& cases, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write corpus " + path.string());
    for (const auto& c : cases) out << case_to_json(c).dump() << '\n';
    if (!out) throw Error(Errc::Io, "write failed for corpus " + path.string());
}

}  // namespace attrib
