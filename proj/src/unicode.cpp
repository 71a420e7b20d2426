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

#include "apksift/unicode.hpp"

#include <cstdint>

namespace apksift {

std::u32string utf8_decode(const std::string& text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    auto trail = [&text](std::size_t at) {
        return at < text.size() &&
               (static_cast<std::uint8_t>(text[at]) & 0xc0) == 0x80;
    };
    while (i < text.size()) {
        std::uint8_t b = static_cast<std::uint8_t>(text[i]);
        char32_t cp = 0xfffd;
        std::size_t adv = 1;
        if (b < 0x80) {
            cp = b;
        } else if ((b & 0xe0) == 0xc0 && trail(i + 1)) {
            cp = (b & 0x1f) << 6 | (text[i + 1] & 0x3f);
            adv = 2;
        } else if ((b & 0xf0) == 0xe0 && trail(i + 1) && trail(i + 2)) {
            cp = (b & 0x0f) << 12 | (text[i + 1] & 0x3f) << 6 |
                 (text[i + 2] & 0x3f);
            adv = 3;
        } else if ((b & 0xf8) == 0xf0 && trail(i + 1) && trail(i + 2) &&
                   trail(i + 3)) {
            cp = (b & 0x07) << 18 | (text[i + 1] & 0x3f) << 12 |
                 (text[i + 2] & 0x3f) << 6 | (text[i + 3] & 0x3f);
            adv = 4;
        }
        out.push_back(cp);
        i += adv;
    }
    return out;
}

std::string utf8_encode(char32_t cp) {
    std::string out;
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
    return out;
}

std::string utf8_encode(const std::u32string& text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) out += utf8_encode(cp);
    return out;
}

} // namespace apksift
