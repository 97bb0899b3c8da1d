#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file score_cache.hpp
 * @brief Content-addressed score cache with optional append-only JSONL
 *        persistence, and a caching scorer decorator with telemetry.
 *
 * Cache file lines: {"ck": <sha256 hex of context>, "yk": <sha256 hex of
 * continuation>, "lp": <log-likelihood>}. A file belongs to one backend;
 * keys do not encode the backend identity.
 */

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include <json.hpp>
#include <openssl/evp.h>

#include "error.hpp"
#include "scoring.hpp"

namespace attrib {

inline std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::Io, "sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0x0F]);
    }
    return out;
}

struct CacheKey {
    std::string ck;
    std::string yk;

    static CacheKey of(const ScoreRequest& request) {
        return {sha256_hex(request.context), sha256_hex(request.continuation)};
    }
    std::string joined() const { return ck + ":" + yk; }
};

/// Thread-safe map from CacheKey to score. Identical keys race benignly
/// (last write wins; values are deterministic for a fixed backend).
class ScoreCache {
public:
    ScoreCache() = default;

    /// Loads `path` if it exists and appends new entries to it. Lines that do
    /// not parse (e.g. a torn final write) are skipped and counted.
    explicit ScoreCache(std::filesystem::path path) : path_(std::move(path)) {
        std::ifstream in(*path_, std::ios::binary);
        const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::istringstream lines(content);
        std::string line;
        while (std::getline(lines, line)) {
            if (line.empty()) continue;
            try {
                const auto j = nlohmann::json::parse(line);
                CacheKey key{j.at("ck").get<std::string>(), j.at("yk").get<std::string>()};
                entries_[key.joined()] = j.at("lp").get<double>();
            } catch (const nlohmann::json::exception&) {
                ++skipped_lines_;
            }
        }
        out_.open(*path_, std::ios::app);
        if (!out_) {
            throw Error(Errc::Io, "cannot open score cache " + path_->string());
        }
        if (!content.empty() && content.back() != '\n') out_ << '\n';
    }

    std::optional<double> find(const CacheKey& key) const {
        std::shared_lock lock(mutex_);
        const auto it = entries_.find(key.joined());
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    void insert(const CacheKey& key, double value) {
        {
            std::unique_lock lock(mutex_);
            entries_[key.joined()] = value;
        }
        if (path_) {
            const nlohmann::json j = {{"ck", key.ck}, {"yk", key.yk}, {"lp", value}};
            std::lock_guard lock(file_mutex_);
            out_ << j.dump() << '\n';
            out_.flush();
        }
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return entries_.size();
    }

    std::size_t skipped_lines() const { return skipped_lines_; }

private:
    std::optional<std::filesystem::path> path_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, double> entries_;
    std::mutex file_mutex_;
    std::ofstream out_;
    std::size_t skipped_lines_ = 0;
};

struct CacheTelemetry {
    std::uint64_t requests = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
};

/// Decorator that answers repeated requests from a ScoreCache.
class CachingScorer final : public Scorer {
public:
    explicit CachingScorer(std::shared_ptr<Scorer> inner,
                           std::shared_ptr<ScoreCache> cache = std::make_shared<ScoreCache>())
        : inner_(std::move(inner)), cache_(std::move(cache)) {
        if (!inner_ || !cache_) throw Error(Errc::InvalidArgument, "caching scorer needs a backend");
    }

    LogLikelihood logprob(const ScoreRequest& request) override {
        validate(request);
        requests_.fetch_add(1, std::memory_order_relaxed);
        const auto key = CacheKey::of(request);
        if (auto hit = cache_->find(key)) {
            hits_.fetch_add(1, std::memory_order_relaxed);
            return LogLikelihood{*hit};
        }
        misses_.fetch_add(1, std::memory_order_relaxed);
        const auto value = inner_->logprob(request);
        cache_->insert(key, value.value);
        return value;
    }

    std::string name() const override { return inner_->name(); }

    CacheTelemetry telemetry() const {
        return {requests_.load(), hits_.load(), misses_.load()};
    }

    void reset_telemetry() {
        requests_ = 0;
        hits_ = 0;
        misses_ = 0;
    }

    const ScoreCache& cache() const { return *cache_; }
    Scorer& inner() { return *inner_; }

private:
    std::shared_ptr<Scorer> inner_;
    std::shared_ptr<ScoreCache> cache_;
    std::atomic<std::uint64_t> requests_{0};
    std::atomic<std::uint64_t> hits_{0};
    std::atomic<std::uint64_t> misses_{0};
};

}  // namespace attrib
