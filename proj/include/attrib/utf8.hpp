#pragma once

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

/**
 * @file utf8.hpp
 * @brief Minimal UTF-8 walking used for character-offset spans.
 *
 * All public offsets in this library count Unicode code points, not bytes.
 * Malformed sequences decode as U+FFFD occupying one byte so offsets stay
 * total on arbitrary input.
 */

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace attrib::utf8 {

struct CodePoint {
    char32_t value;
    std::size_t byte_offset;
    std::size_t byte_length;
};

inline std::vector<CodePoint> decode(std::string_view text) {
    std::vector<CodePoint> out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto lead = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        char32_t cp = lead;
        if (lead >= 0xF0 && lead <= 0xF4) {
            len = 4;
            cp = lead & 0x07;
        } else if (lead >= 0xE0) {
            len = 3;
            cp = lead & 0x0F;
        } else if (lead >= 0xC2 && lead < 0xE0) {
            len = 2;
            cp = lead & 0x1F;
        } else if (lead >= 0x80) {
            len = 0;
        }
        bool ok = len > 0 && i + len <= text.size();
        for (std::size_t k = 1; ok && k < len; ++k) {
            const auto cont = static_cast<unsigned char>(text[i + k]);
            if ((cont & 0xC0) != 0x80) {
                ok = false;
            } else {
                cp = (cp << 6) | (cont & 0x3F);
            }
        }
        if (!ok) {
            out.push_back({U'\uFFFD', i, 1});
            ++i;
            continue;
        }
        out.push_back({cp, i, len});
        i += len;
    }
    return out;
}

inline std::size_t length(std::string_view text) { return decode(text).size(); }

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

/// Substring by code point range [begin, end). Out-of-range ends clamp.
inline std::string_view substr(std::string_view text, std::size_t begin, std::size_t end) {
    const auto cps = decode(text);
    auto byte_at = [&](std::size_t idx) {
        return idx >= cps.size() ? text.size() : cps[idx].byte_offset;
    };
    if (begin > end) begin = end;
    const auto b = byte_at(begin);
    return text.substr(b, byte_at(end) - b);
}

inline bool is_space(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
        case U'\u00A0': case U'\u3000':
            return true;
        default:
            return false;
    }
}

}  // namespace attrib::utf8
