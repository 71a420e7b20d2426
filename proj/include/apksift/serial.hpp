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

#ifndef APKSIFT_SERIAL_HPP
#define APKSIFT_SERIAL_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace apksift {

/// X.509 certificate serial number, normalized to the minimal big-endian
/// magnitude: redundant leading 0x00 octets (including the DER sign marker
/// of a non-negative INTEGER whose high bit is set) are stripped, so the
/// stored bytes match the conventional colon-hex rendering, e.g.
/// "93:6e:ac:be:07:f2:01:df". The zero serial keeps a single 0x00.
/// Equality and ordering are on bytes, never on the display string.
class serial_number {
public:
    serial_number() : bytes_(1, 0x00) {}

    /// Normalizes arbitrary big-endian content octets (e.g. the content
    /// of a DER INTEGER). An empty input denotes zero.
    explicit serial_number(std::span<const std::uint8_t> content);

    /// Parses a colon-hex display string ("0a:1b" or "0A1B"); colons are
    /// optional, hex digits case-insensitive. Throws errc::schema_violation.
    static serial_number from_display(const std::string& text);

    const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

    /// Lowercase colon-separated hex, one group per byte.
    std::string display() const;

    auto operator<=>(const serial_number& other) const = default;

private:
    std::vector<std::uint8_t> bytes_;
};

} // namespace apksift

#endif
