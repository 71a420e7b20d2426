/*
 * Copyright (C) 2026 The Apksift Project
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "apksift/dex.hpp"
#include "apksift/error.hpp"

namespace apksift {

namespace {

constexpr std::size_t kHeaderSize = 0x70;
constexpr std::size_t kStringIdsSizeOff = 56;
constexpr std::size_t kStringIdsOff = 60;

std::uint32_t read_u32(std::span<const std::uint8_t> d, std::size_t off) {
    return static_cast<std::uint32_t>(d[off]) |
           static_cast<std::uint32_t>(d[off + 1]) << 8 |
           static_cast<std::uint32_t>(d[off + 2]) << 16 |
           static_cast<std::uint32_t>(d[off + 3]) << 24;
}

bool check_magic(std::span<const std::uint8_t> d) {
    // "dex\n0NN\0" for any version digits
    if (d.size() < 8) return false;
    if (d[0] != 'd' || d[1] != 'e' || d[2] != 'x' || d[3] != '\n') return false;
    if (d[4] != '0' || d[7] != '\0') return false;
    auto digit = [](std::uint8_t c) { return c >= '0' && c <= '9'; };
    return digit(d[5]) && digit(d[6]);
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp <= 0x7f) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7ff) {
        out.push_back(static_cast<char>(0xc0 | cp >> 6));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp <= 0xffff) {
        out.push_back(static_cast<char>(0xe0 | cp >> 12));
        out.push_back(static_cast<char>(0x80 | (cp >> 6 & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | cp >> 18));
        out.push_back(static_cast<char>(0x80 | (cp >> 12 & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp >> 6 & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

constexpr std::uint32_t kReplacement = 0xfffd;

/// MUTF-8 to UTF-8: 1-3 byte sequences only, U+0000 as C0 80, surrogate
/// pairs re-combined. Anything undecodable becomes U+FFFD and the scan
/// resynchronizes at the next byte.
std::string decode_mutf8(std::span<const std::uint8_t> bytes) {
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    auto trail = [&](std::size_t at) {
        return at < bytes.size() && (bytes[at] & 0xc0) == 0x80;
    };
    while (i < bytes.size()) {
        std::uint8_t b = bytes[i];
        std::uint32_t cp;
        if ((b & 0x80) == 0) {
            cp = b;
            i += 1;
        } else if ((b & 0xe0) == 0xc0 && trail(i + 1)) {
            cp = (b & 0x1f) << 6 | (bytes[i + 1] & 0x3f);
            i += 2;
        } else if ((b & 0xf0) == 0xe0 && trail(i + 1) && trail(i + 2)) {
            cp = (b & 0x0f) << 12 | (bytes[i + 1] & 0x3f) << 6 |
                 (bytes[i + 2] & 0x3f);
            i += 3;
        } else {
            out.append("\xef\xbf\xbd");  // U+FFFD
            i += 1;
            continue;
        }
        if (cp >= 0xd800 && cp <= 0xdbff) {
            // try to pair with a following low surrogate
            if (i + 2 < bytes.size() && (bytes[i] & 0xf0) == 0xe0 &&
                trail(i + 1) && trail(i + 2)) {
                std::uint32_t lo = (bytes[i] & 0x0f) << 12 |
                                   (bytes[i + 1] & 0x3f) << 6 |
                                   (bytes[i + 2] & 0x3f);
                if (lo >= 0xdc00 && lo <= 0xdfff) {
                    cp = 0x10000 + ((cp - 0xd800) << 10) + (lo - 0xdc00);
                    i += 3;
                } else {
                    cp = kReplacement;
                }
            } else {
                cp = kReplacement;
            }
        } else if (cp >= 0xdc00 && cp <= 0xdfff) {
            cp = kReplacement;  // unpaired low surrogate
        }
        append_utf8(out, cp);
    }
    return out;
}

} // namespace

std::vector<std::string> read_dex_strings(std::span<const std::uint8_t> data,
                                          const std::string& entry_name) {
    auto fail = [&entry_name](const std::string& what) -> void {
        throw error(errc::dex_malformed, entry_name + ": " + what);
    };

    if (data.size() < kHeaderSize) fail("file smaller than a DEX header");
    if (!check_magic(data)) fail("bad magic");

    std::uint32_t count = read_u32(data, kStringIdsSizeOff);
    std::uint32_t table_off = read_u32(data, kStringIdsOff);
    if (count != 0 &&
        (table_off > data.size() || 4ull * count > data.size() - table_off)) {
        fail("string_ids table out of range");
    }

    std::vector<std::string> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::uint32_t str_off = read_u32(data, table_off + 4ull * i);
        if (str_off >= data.size()) {
            fail("string_data offset " + std::to_string(i) + " out of range");
        }
        // string_data_item: uleb128 utf16 length, MUTF-8 bytes, NUL
        std::size_t pos = str_off;
        std::uint32_t shift = 0;
        while (true) {
            if (pos >= data.size() || shift > 28) {
                fail("unterminated uleb128 in string " + std::to_string(i));
            }
            std::uint8_t b = data[pos++];
            shift += 7;
            if ((b & 0x80) == 0) break;
        }
        std::size_t start = pos;
        while (pos < data.size() && data[pos] != 0) ++pos;
        if (pos >= data.size()) {
            fail("string " + std::to_string(i) + " is not NUL-terminated");
        }
        out.push_back(decode_mutf8(data.subspan(start, pos - start)));
    }
    return out;
}

} // namespace apksift
