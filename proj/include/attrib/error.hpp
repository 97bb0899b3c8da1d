#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#include <stdexcept>
#include <string>

namespace attrib {

enum class Errc {
    InvalidArgument,
    OutOfRange,
    NotFound,
    InvalidContinuation,
    Backend,
    Protocol,
    Corpus,
    NoEvidence,
    Conflict,
    Io,
};

inline const char* errc_name(Errc code) {
    switch (code) {
        case Errc::InvalidArgument: return "invalid-argument";
        case Errc::OutOfRange: return "out-of-range";
        case Errc::NotFound: return "not-found";
        case Errc::InvalidContinuation: return "invalid-continuation";
        case Errc::Backend: return "backend";
        case Errc::Protocol: return "protocol";
        case Errc::Corpus: return "corpus";
        case Errc::NoEvidence: return "no-evidence";
        case Errc::Conflict: return "conflict";
        case Errc::Io: return "io";
    }
    return "unknown";
}

/// Single exception type for every domain failure. `http_status` is set for
/// backend errors (0 when the transport never produced a response).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, int http_status = 0)
        : std::runtime_error(what), code_(code), http_status_(http_status) {}

    Errc code() const noexcept { return code_; }
    int http_status() const noexcept { return http_status_; }

private:
    Errc code_;
    int http_status_;
};

}  // namespace attrib
