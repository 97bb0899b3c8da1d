// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "attrib/attrib.hpp"
#include "oracles.hpp"
#include "recorded_transport.hpp"
#include "service_fixture.hpp"

using namespace attrib;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

struct Instance {
    Dialogue dialogue;
    TargetResponse target;
};

/// Random dialogues over a small shared vocabulary so targets overlap
/// teacher sentences at varying rates.
std::vector<Instance> random_instances(int count, std::uint32_t seed) {
    static const std::vector<std::string> words = {
        "praise", "effort", "hits", "peers", "recess", "lunch", "calm", "routine", "music", "dog",
        "bus", "homework", "quiet", "reward", "anxious", "reading", "math", "noise", "friends", "art"};
    std::mt19937 rng(seed);
    auto pick = [&](int n) {
        std::string s;
        for (int i = 0; i < n; ++i) s += (i ? " " : "") + words[rng() % words.size()];
        return s;
    };
    std::vector<Instance> out;
    for (int k = 0; k < count; ++k) {
        Dialogue d("inst-" + std::to_string(k));
        const int turns = 1 + static_cast<int>(rng() % 5);
        for (int t = 0; t < turns; ++t) {
            std::string teacher;
            const int sentences = 1 + static_cast<int>(rng() % 4);
            for (int s = 0; s < sentences; ++s) {
                teacher += (s ? " " : "") + pick(2 + static_cast<int>(rng() % 6));
                teacher[teacher.size() - 1] = teacher.back();
                teacher += (rng() % 5 == 0) ? "!" : ".";
            }
            d.append(teacher, t + 1 < turns ? pick(3) + "?" : "");
        }
        out.push_back({std::move(d), TargetResponse(pick(1 + static_cast<int>(rng() % 4)))});
    }
    return out;
}

std::vector<Sentence> pooled_sentences(const Dialogue& d) {
    std::vector<Sentence> out;
    for (const auto& t : d.turns()) {
        for (auto& s : segment_turn(t)) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

int main() {
    const auto instances = random_instances(1000, 20260418);

    criterion("eq4-identity", [&]() -> Outcome {
        const auto t0 = std::chrono::steady_clock::now();
        LexicalScorer scorer;
        double worst = 0.0;
        std::size_t checked = 0;
        for (const auto& inst : instances) {
            const auto& y = inst.target.text();
            for (int t = 1; t <= inst.dialogue.size(); ++t) {
                const auto sents = segment_turn(inst.dialogue.turn(t));
                for (const auto& sc : phi_scores(std::span<const Sentence>(sents), inst.target, scorer)) {
                    const double alone = oracle::lexical(serialize_teacher_context(std::vector<Sentence>{sc.sentence}), y);
                    const double rest = oracle::lexical(serialize_teacher_context(sents, sc.sentence.sentence_index), y);
                    worst = std::max(worst, std::abs((sc.drop + sc.hold) - (alone - rest)));
                    ++checked;
                }
            }
            const auto pooled = pooled_sentences(inst.dialogue);
            const auto flat = attribute_flat(inst.dialogue, inst.target, scorer, Method::FlatDropHold);
            for (const auto& sc : flat.ranked) {
                std::size_t pos = 0;
                while (!(pooled[pos] == sc.sentence)) ++pos;
                const double alone = oracle::lexical(serialize_teacher_context(std::vector<Sentence>{sc.sentence}), y);
                const double rest = oracle::lexical(detail::join_teacher_context(pooled, pos), y);
                worst = std::max(worst, std::abs((sc.drop + sc.hold) - (alone - rest)));
                ++checked;
            }
        }
        const double secs = seconds_since(t0);
        std::ostringstream d;
        d << instances.size() << " instances, " << checked << " sentences, max err " << worst << ", "
          << fmt("%.2f", secs) << " s (limits 1e-9, 10 s)";
        return {worst <= 1e-9 && secs < 10.0, d.str()};
    });

    criterion("telescoping", [&]() -> Outcome {
        LexicalScorer scorer;
        double worst = 0.0;
        for (const auto& inst : instances) {
            double sum = 0.0;
            for (const auto& g : turn_gains(inst.dialogue, inst.target, scorer)) sum += g.gain;
            const auto& y = inst.target.text();
            const double direct = oracle::lexical(serialize_prefix(inst.dialogue, inst.dialogue.size()), y) -
                                  oracle::lexical(serialize_prefix(inst.dialogue, 0), y);
            worst = std::max(worst, std::abs(sum - direct));
        }
        std::ostringstream d;
        d << "max |sum g_i - (L(C_n) - L(C_0))| = " << worst << " (limit 1e-9)";
        return {worst <= 1e-9, d.str()};
    });

    criterion("hierarchical-locality", [&]() -> Outcome {
        LexicalScorer scorer;
        std::size_t ok = 0;
        for (const auto& inst : instances) {
            const auto r = attribute_hierarchical(inst.dialogue, inst.target, scorer);
            bool local = r.selected_turn && r.evidence.turn_index == *r.selected_turn;
            for (const auto& s : r.ranked) local = local && s.sentence.turn_index == *r.selected_turn;
            ok += local;
        }
        return {ok == instances.size(),
                std::to_string(ok) + "/" + std::to_string(instances.size()) + " instances local"};
    });

    criterion("scorer-call-budget", [&]() -> Outcome {
        std::size_t ok = 0;
        for (const auto& inst : instances) {
            CachingScorer scorer(std::make_shared<LexicalScorer>());
            const auto r = attribute_hierarchical(inst.dialogue, inst.target, scorer);
            const auto n = segment_turn(inst.dialogue.turn(*r.selected_turn)).size();
            const auto T = static_cast<std::size_t>(inst.dialogue.size());
            // Independent count of the distinct strings the method must score.
            std::set<std::string> contexts;
            for (int i = 0; i <= inst.dialogue.size(); ++i) contexts.insert(serialize_prefix(inst.dialogue, i));
            const auto sents = segment_turn(inst.dialogue.turn(*r.selected_turn));
            contexts.insert(serialize_teacher_context(sents));
            for (const auto& s : sents) {
                contexts.insert(serialize_teacher_context(std::vector<Sentence>{s}));
                contexts.insert(serialize_teacher_context(sents, s.sentence_index));
            }
            const auto t = scorer.telemetry();
            ok += t.requests == (T + 1) + (2 * n + 1) && t.misses == contexts.size() &&
                  t.hits + t.misses == t.requests;
        }
        return {ok == instances.size(), std::to_string(ok) + "/" + std::to_string(instances.size()) +
                                            " instances issue (T+1)+(2n+1) requests"};
    });

    std::vector<MetricsReport> clean_rows;
    criterion("synthetic-clean", [&]() -> Outcome {
        const auto t0 = std::chrono::steady_clock::now();
        const auto cases = generate_synthetic(200, 4, 42, NoiseLevel::Clean);
        LexicalScorer scorer;
        const auto r = evaluate(std::span<const BenchmarkCase>(cases), Method::Hierarchical, scorer);
        const double secs = seconds_since(t0);
        std::ostringstream d;
        d << "Hierarchical Hit@1 " << fmt("%.3f", r.hit1) << " MRR " << fmt("%.3f", r.mrr) << ", "
          << fmt("%.2f", secs) << " s (need Hit@1 >= 0.95, MRR >= 0.97, < 60 s)";
        return {r.hit1 >= 0.95 && r.mrr >= 0.97 && secs < 60.0, d.str()};
    });

    criterion("synthetic-hard-ordering", [&]() -> Outcome {
        const auto cases = generate_synthetic(200, 4, 42, NoiseLevel::Hard);
        LexicalScorer scorer;
        const auto h = evaluate(std::span<const BenchmarkCase>(cases), Method::Hierarchical, scorer);
        const auto f = evaluate(std::span<const BenchmarkCase>(cases), Method::FlatDropHold, scorer);
        const auto s = evaluate(std::span<const BenchmarkCase>(cases), Method::Similarity, scorer);
        std::ostringstream d;
        d << "MRR Hierarchical " << fmt("%.3f", h.mrr) << ", Drop+Hold " << fmt("%.3f", f.mrr)
          << ", Similarity " << fmt("%.3f", s.mrr) << " (need H >= D+H >= Sim)";
        return {h.mrr >= f.mrr && f.mrr >= s.mrr, d.str()};
    });

    criterion("metric-oracle", [&]() -> Outcome {
        std::mt19937 rng(496);
        std::vector<std::vector<int>> rankings;
        std::vector<std::set<int>> gold;
        std::vector<std::optional<std::size_t>> ranks;
        for (int c = 0; c < 500; ++c) {
            std::vector<int> ids(1 + rng() % 9);
            for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i) + 1;
            std::shuffle(ids.begin(), ids.end(), rng);
            std::set<int> g;
            for (std::size_t k = 0, n = 1 + rng() % 3; k < n; ++k) g.insert(1 + static_cast<int>(rng() % 12));
            std::vector<SentenceScore> ranked(ids.size());
            for (std::size_t i = 0; i < ids.size(); ++i) ranked[i].sentence = {1, ids[i], "", {}};
            std::vector<GoldRef> refs;
            for (int id : g) refs.push_back({1, id});
            ranks.push_back(best_gold_rank(ranked, refs));
            rankings.push_back(std::move(ids));
            gold.push_back(std::move(g));
        }
        const auto lib = aggregate_ranks("m", ranks);
        const auto ref = oracle::metrics(rankings, gold);
        const bool exact = lib.hit1 == ref.hit1 && lib.hit3 == ref.hit3 && lib.hit5 == ref.hit5 && lib.mrr == ref.mrr;
        std::ostringstream d;
        d << "500 rankings, Hit@1/3/5 " << fmt("%.3f", lib.hit1) << "/" << fmt("%.3f", lib.hit3) << "/"
          << fmt("%.3f", lib.hit5) << " MRR " << fmt("%.4f", lib.mrr) << (exact ? ", exact" : ", MISMATCH");
        return {exact, d.str()};
    });

    criterion("kappa-suite", [&]() -> Outcome {
        const bool identity = cohen_kappa({"a", {1, 0, 1, 1, 0}}, {"b", {1, 0, 1, 1, 0}}) == 1.0;
        const bool zero = cohen_kappa({"a", {1, 1, 0, 0}}, {"b", {1, 0, 0, 1}}) == 0.0;
        std::mt19937 rng(81);
        bool symmetric = true;
        for (int i = 0; i < 1000; ++i) {
            AnnotationSet a{"a", {}}, b{"b", {}};
            for (std::size_t k = 0, n = 2 + rng() % 30; k < n; ++k) {
                a.labels.push_back(static_cast<int>(rng() % 2));
                b.labels.push_back(static_cast<int>(rng() % 2));
            }
            a.labels[0] = 0;
            a.labels[1] = 1;
            symmetric = symmetric && cohen_kappa(a, b) == cohen_kappa(b, a) && cohen_kappa(a, a) == 1.0;
        }
        return {identity && zero && symmetric,
                std::string("identity ") + (identity ? "ok" : "bad") + ", hand zero case " + (zero ? "ok" : "bad") +
                    ", symmetry on 1000 random pairs " + (symmetric ? "ok" : "bad")};
    });

    criterion("service-round-trip", [&]() -> Outcome {
        using namespace testing_support;
        const auto dir = fresh_dir("acceptance_service");
        const auto log = dir / "sessions.jsonl";
        std::string id, before;
        bool spans_ok = true;
        {
            auto service = make_service(log);
            id = service->create_session().id;
            for (const auto& m : kTeacherMessages) service->post_message(id, m);
            const auto r = service->attribute(id);
            service->explain(id);
            const auto s = service->get_session(id);
            for (const auto& sc : r.ranked) spans_ok = spans_ok && span_indexes(s.dialogue, sc.sentence);
            spans_ok = spans_ok && span_indexes(s.dialogue, r.evidence);
            before = session_to_json(s).dump();
        }
        auto restarted = make_service(log);
        const auto after = session_to_json(restarted->get_session(id)).dump();
        std::filesystem::remove_all(dir);
        const bool same = after == before;
        return {same && spans_ok, std::string("3 messages, attribute, explain; restart ") +
                                      (same ? "byte-identical" : "DIFFERS") + ", spans " +
                                      (spans_ok ? "valid" : "INVALID")};
    });

    criterion("remote-scorer-protocol", [&]() -> Outcome {
        using testing_support::read_data;
        using testing_support::RecordedTransport;
        const ScoreRequest request{"Assistant:", "Use praise"};
        ScorerBackendConfig config;
        config.kind = ScorerBackendConfig::Kind::Remote;
        config.endpoint_url = "http://scorer.test:8000";
        config.model_name = "dialogue-3b";
        config.max_retries = 2;
        config.backoff_ms = 5;

        const double sum = parse_echo_logprobs(json::parse(read_data("completions_ok.json")), request).value;
        bool boundary = false;
        try {
            parse_echo_logprobs(json::parse(read_data("completions_boundary_mismatch.json")), request);
        } catch (const Error& e) {
            boundary = e.code() == Errc::Protocol;
        }

        auto transport = std::make_shared<RecordedTransport>();
        transport->push_timeout();
        transport->push_status(503);
        transport->push_ok(read_data("completions_ok.json"));
        std::vector<long> sleeps;
        RemoteScorer scorer(config, transport, [&](auto d) { sleeps.push_back(d.count()); });
        const double retried = scorer.logprob(request).value;
        const bool retry_ok = retried == -3.5 && scorer.telemetry().retries == 2 &&
                              sleeps == std::vector<long>{5, 10};

        const bool ok = sum == -3.5 && boundary && retry_ok;
        std::ostringstream d;
        d << "golden sum " << sum << ", boundary mismatch " << (boundary ? "rejected" : "ACCEPTED")
          << ", retry after timeout+503 " << (retry_ok ? "ok" : "bad");
        return {ok, d.str()};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
