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

#ifndef APKSIFT_DER_HPP
#define APKSIFT_DER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "apksift/serial.hpp"

namespace apksift {

/// One decoded tag-length-value element of a BER/DER stream.
struct der_element {
    std::uint8_t tag = 0;                    // full identifier octet
    std::span<const std::uint8_t> content;   // value octets
    std::span<const std::uint8_t> rest;      // stream after this element

    std::uint8_t tag_class() const { return tag >> 6; }
    bool constructed() const { return (tag & 0x20) != 0; }
    std::uint8_t tag_number() const { return tag & 0x1f; }
};

/// Reads the next element; nullopt on malformed or truncated input.
/// Multi-byte tag numbers and indefinite lengths are rejected (DER never
/// uses them and X.509 structures never need them).
std::optional<der_element> der_read(std::span<const std::uint8_t> data);

/// Walks a PKCS#7/CMS SignedData container and collects the serialNumber
/// INTEGER of every embedded certificate:
///   ContentInfo -> [0] -> SignedData -> certificates [0] -> Certificate*
///   Certificate -> tbsCertificate -> (skip [0] version) -> serialNumber
/// A bare certificate (not wrapped in ContentInfo) is accepted too.
/// Returns an empty list when the buffer holds no recognizable certificate.
std::vector<serial_number> extract_cert_serials(
    std::span<const std::uint8_t> der);

} // namespace apksift

#endif
