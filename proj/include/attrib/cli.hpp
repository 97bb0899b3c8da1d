#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file cli.hpp
 * @brief `attrib` command-line entry point.
 *
 * Exit codes: 0 success, 1 domain error (bad input file, backend failure,
 * corpus error, ...), 2 usage error.
 */

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "attribution.hpp"
#include "config.hpp"
#include "corpus.hpp"
#include "evaluation.hpp"
#include "http_server.hpp"
#include "httplib_transport.hpp"
#include "json.hpp"
#include "report.hpp"
#include "service.hpp"
#include "synthetic.hpp"

namespace attrib::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct ScorerFlags {
    std::string kind = "lexical";
    std::string endpoint;
    std::string model;
    int timeout_ms = 30000;
    int retries = 3;
    std::string cache;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--scorer", kind, "Scoring backend")
            ->check(CLI::IsMember({"lexical", "remote"}))
            ->capture_default_str();
        cmd.add_option("--endpoint", endpoint, "Completions endpoint base URL (remote scorer)");
        cmd.add_option("--model", model, "Model name (remote scorer)");
        cmd.add_option("--timeout-ms", timeout_ms, "Remote request timeout")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd.add_option("--retries", retries, "Remote retry budget")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        cmd.add_option("--cache", cache, "Persistent score cache file (ATTRIB_CACHE overrides)");
    }

    ScorerBackendConfig config() const {
        ScorerBackendConfig c;
        c.kind = kind == "remote" ? ScorerBackendConfig::Kind::Remote : ScorerBackendConfig::Kind::Lexical;
        c.endpoint_url = endpoint;
        c.model_name = model;
        c.timeout_ms = timeout_ms;
        c.max_retries = retries;
        return c;
    }

    std::string cache_path() const {
        if (const char* env = std::getenv("ATTRIB_CACHE"); env && *env) return env;
        return cache;
    }
};

inline std::vector<std::string> method_names() {
    std::vector<std::string> names;
    for (Method m : kAllMethods) names.emplace_back(method_name(m));
    return names;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(Errc::InvalidArgument, path + " is not valid JSON: " + e.what());
    }
}

inline AnnotationSet read_annotations(const std::string& path) {
    const auto j = read_json_file(path);
    try {
        return {j.value("rater_id", path), j.at("labels").get<std::vector<int>>()};
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, path + ": " + e.what());
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"Evidence attribution for diagnostic dialogues", "attrib"};
    app.require_subcommand(1);

    // attribute
    auto* attribute_cmd = app.add_subcommand("attribute", "Find the evidence sentence for a target response");
    std::string dialogue_path, target_text, method_str = "hierarchical";
    bool as_json = false;
    ScorerFlags attribute_scorer;
    attribute_cmd->add_option("--dialogue", dialogue_path, "Dialogue JSON file")->required();
    attribute_cmd->add_option("--target", target_text, "Recommended response text")->required();
    attribute_cmd->add_option("--method", method_str, "Attribution method")
        ->check(CLI::IsMember(method_names()))
        ->capture_default_str();
    attribute_cmd->add_flag("--json", as_json, "Print the result as JSON");
    attribute_scorer.add_to(*attribute_cmd);

    // evaluate
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Hit@k / MRR over a benchmark corpus");
    std::string corpus_path, eval_method = "hierarchical";
    bool all_methods = false, eval_json = false;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    ScorerFlags evaluate_scorer;
    evaluate_cmd->add_option("--corpus", corpus_path, "Benchmark JSONL file")->required();
    evaluate_cmd->add_option("--method", eval_method, "Attribution method")
        ->check(CLI::IsMember(method_names()))
        ->capture_default_str();
    evaluate_cmd->add_flag("--all-methods", all_methods, "Evaluate every method, one row each");
    evaluate_cmd->add_option("--jobs", jobs, "Parallel case evaluations")->check(CLI::PositiveNumber);
    evaluate_cmd->add_flag("--json", eval_json, "Print the report as JSON");
    evaluate_scorer.add_to(*evaluate_cmd);

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic planted-evidence corpus");
    std::string out_path;
    int n_cases = 0, n_turns = 0;
    std::uint64_t seed = 0;
    bool hard = false;
    generate_cmd->add_option("--out", out_path, "Output JSONL path")->required();
    generate_cmd->add_option("--cases", n_cases, "Number of cases")->required()->check(CLI::PositiveNumber);
    generate_cmd->add_option("--turns", n_turns, "Turns per dialogue (>= 2)")->required()->check(CLI::Range(2, 1000));
    generate_cmd->add_option("--seed", seed, "Random seed")->required();
    generate_cmd->add_flag("--hard", hard, "Distractors may share one target token");

    // kappa
    auto* kappa_cmd = app.add_subcommand("kappa", "Cohen's kappa between two binary annotation files");
    std::string kappa_a, kappa_b;
    bool kappa_json = false;
    kappa_cmd->add_option("--a", kappa_a, "First rater JSON {\"rater_id\", \"labels\"}")->required();
    kappa_cmd->add_option("--b", kappa_b, "Second rater JSON")->required();
    kappa_cmd->add_flag("--json", kappa_json, "Print JSON");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP session service");
    std::string config_path, listen, store_override, script_override;
    serve_cmd->add_option("--config", config_path, "Service config JSON")->required();
    serve_cmd->add_option("--listen", listen, "host:port (overrides config)");
    serve_cmd->add_option("--store", store_override, "Session log path (overrides config)");
    serve_cmd->add_option("--script", script_override, "Scripted chat fixture (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*attribute_cmd) {
            const auto method = parse_method(method_str);
            const TargetResponse target(target_text);
            attribute_scorer.config().validate();
            const auto dialogue = dialogue_from_json(read_json_file(dialogue_path));
            auto scorer = make_cached_scorer(attribute_scorer.config(), std::make_shared<HttplibTransport>(),
                                             attribute_scorer.cache_path());
            const auto result = attribute(attribution_context(dialogue, target.text()), target, method, *scorer);
            if (as_json) {
                out << attribution_to_json(result).dump(2) << '\n';
            } else {
                out << format_attribution(result);
            }
        } else if (*evaluate_cmd) {
            const auto config = evaluate_scorer.config();
            config.validate();
            const auto cases = load_corpus(corpus_path);
            if (cases.empty()) throw Error(Errc::Corpus, corpus_path + " contains no cases");
            auto scorer = make_cached_scorer(config, std::make_shared<HttplibTransport>(),
                                             evaluate_scorer.cache_path());
            std::vector<MetricsReport> rows;
            if (all_methods) {
                for (Method m : kAllMethods) rows.push_back(evaluate(std::span(cases), m, *scorer, jobs));
            } else {
                rows.push_back(evaluate(std::span(cases), parse_method(eval_method), *scorer, jobs));
            }
            if (eval_json) {
                out << metrics_list_to_json(rows).dump(2) << '\n';
            } else {
                out << format_metrics_table(rows);
            }
        } else if (*generate_cmd) {
            const auto cases = generate_synthetic(n_cases, n_turns, seed,
                                                  hard ? NoiseLevel::Hard : NoiseLevel::Clean);
            save_corpus(cases, out_path);
            out << "wrote " << cases.size() << " cases to " << out_path << '\n';
        } else if (*kappa_cmd) {
            const auto a = read_annotations(kappa_a);
            const auto b = read_annotations(kappa_b);
            const double kappa = cohen_kappa(a, b);
            if (kappa_json) {
                out << json{{"rater_a", a.rater_id}, {"rater_b", b.rater_id}, {"n", a.labels.size()},
                            {"kappa", kappa}}.dump(2)
                    << '\n';
            } else {
                out << fixed3(kappa) << '\n';
            }
        } else if (*serve_cmd) {
            auto config = load_service_config(config_path);
            if (!listen.empty()) parse_listen(listen, config.host, config.port);
            if (!store_override.empty()) config.store_path = store_override;
            if (!script_override.empty()) {
                config.chat = ChatBackendConfig{ChatBackendConfig::Kind::Scripted, script_override, {}, {}};
            }
            if (const char* env = std::getenv("ATTRIB_CACHE"); env && *env) config.cache_path = env;
            config.validate();

            auto transport = std::make_shared<HttplibTransport>();
            auto chat = make_chat(config.chat, transport);
            auto explainer = config.chat.kind == ChatBackendConfig::Kind::Remote ? chat : nullptr;
            Service service(std::make_shared<SessionStore>(config.store_path, config.snapshot_every), chat,
                            make_cached_scorer(config.scorer, transport, config.cache_path), explainer);
            HttpServer server(service);
            const int port = server.bind(config.host, config.port);
            out << "listening on " << config.host << ":" << port << std::endl;
            server.listen_after_bind();
        }
    } catch (const Error& e) {
        err << "error (" << errc_name(e.code()) << "): " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitOk;
}

}  // namespace attrib::cli
