#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include <chrono>
#include <string>

#include <httplib.h>

#include "transport.hpp"

namespace attrib {

/// Plain-HTTP transport backed by cpp-httplib. One client per call keeps the
/// transport stateless and safe to share between threads.
class HttplibTransport final : public HttpTransport {
public:
    HttpResponse post(const std::string& base_url, const std::string& path,
                      const std::string& body, std::chrono::milliseconds timeout) override {
        httplib::Client client(base_url);
        const auto secs = timeout.count() / 1000;
        const auto usecs = (timeout.count() % 1000) * 1000;
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);
        auto result = client.Post(path, body, "application/json");
        if (!result) {
            throw Error(Errc::Backend,
                        "transport error talking to " + base_url + ": " +
                            httplib::to_string(result.error()),
                        0);
        }
        return {result->status, result->body};
    }
};

}  // namespace attrib
