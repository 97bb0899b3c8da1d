#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <semaphore>
#include <string>
#include <thread>

#include "error.hpp"

namespace attrib {

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// POST-only JSON transport. Implementations throw Error(Errc::Backend, ...,
/// 0) when no response arrives (connect failure, timeout).
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post(const std::string& base_url, const std::string& path,
                              const std::string& body, std::chrono::milliseconds timeout) = 0;
};

struct RetryPolicy {
    int max_retries = 3;
    std::chrono::milliseconds timeout{30000};
    std::chrono::milliseconds backoff{200};
};

using SleepFn = std::function<void(std::chrono::milliseconds)>;

inline SleepFn default_sleep() {
    return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

struct TransportTelemetry {
    std::uint64_t attempts = 0;
    std::uint64_t retries = 0;
};

/**
 * Retrying POST client shared by the remote scorer and the remote chat
 * backend. Transport failures, 429 and 5xx are retried with exponential
 * backoff (backoff * 2^k); other non-2xx statuses fail immediately.
 * In-flight requests are bounded by `max_in_flight`.
 */
class RetryingClient {
public:
    RetryingClient(std::shared_ptr<HttpTransport> transport, std::string base_url,
                   RetryPolicy policy, int max_in_flight = 4, SleepFn sleep = default_sleep())
        : transport_(std::move(transport)),
          base_url_(std::move(base_url)),
          policy_(policy),
          slots_(max_in_flight < 1 ? 1 : max_in_flight),
          sleep_(std::move(sleep)) {
        if (!transport_) throw Error(Errc::InvalidArgument, "missing HTTP transport");
        if (max_in_flight > kMaxInFlight) {
            throw Error(Errc::InvalidArgument, "max_in_flight above " + std::to_string(kMaxInFlight));
        }
    }

    std::string post_json(const std::string& path, const std::string& body) {
        int last_status = 0;
        std::string last_error;
        for (int attempt = 0; attempt <= policy_.max_retries; ++attempt) {
            if (attempt > 0) {
                retries_.fetch_add(1, std::memory_order_relaxed);
                sleep_(policy_.backoff * (1LL << (attempt - 1)));
            }
            attempts_.fetch_add(1, std::memory_order_relaxed);
            HttpResponse response;
            try {
                slots_.acquire();
                struct Release {
                    std::counting_semaphore<kMaxInFlight>& s;
                    ~Release() { s.release(); }
                } release{slots_};
                response = transport_->post(base_url_, path, body, policy_.timeout);
            } catch (const Error& e) {
                if (e.code() != Errc::Backend) throw;
                last_status = e.http_status();
                last_error = e.what();
                continue;
            }
            if (response.status >= 200 && response.status < 300) return std::move(response.body);
            last_status = response.status;
            last_error = "HTTP " + std::to_string(response.status);
            if (response.status != 429 && response.status < 500) break;
        }
        throw Error(Errc::Backend,
                    "POST " + base_url_ + path + " failed: " + last_error, last_status);
    }

    TransportTelemetry telemetry() const { return {attempts_.load(), retries_.load()}; }

private:
    static constexpr std::ptrdiff_t kMaxInFlight = 256;

    std::shared_ptr<HttpTransport> transport_;
    std::string base_url_;
    RetryPolicy policy_;
    std::counting_semaphore<kMaxInFlight> slots_;
    SleepFn sleep_;
    std::atomic<std::uint64_t> attempts_{0};
    std::atomic<std::uint64_t> retries_{0};
};

}  // namespace attrib
