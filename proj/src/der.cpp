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

#include "apksift/der.hpp"

namespace apksift {

namespace {

constexpr std::uint8_t kTagInteger = 0x02;
constexpr std::uint8_t kTagOid = 0x06;
constexpr std::uint8_t kTagSequence = 0x30;
// context [0], constructed
constexpr std::uint8_t kTagCtx0 = 0xa0;

// 1.2.840.113549.1.7.2 (pkcs7-signedData)
constexpr std::uint8_t kOidSignedData[] = {0x2a, 0x86, 0x48, 0x86, 0xf7,
                                           0x0d, 0x01, 0x07, 0x02};

bool is_signed_data_oid(std::span<const std::uint8_t> content) {
    if (content.size() != sizeof(kOidSignedData)) return false;
    for (std::size_t i = 0; i < content.size(); ++i) {
        if (content[i] != kOidSignedData[i]) return false;
    }
    return true;
}

} // namespace

std::optional<der_element> der_read(std::span<const std::uint8_t> data) {
    if (data.size() < 2) return std::nullopt;
    der_element el;
    el.tag = data[0];
    if ((el.tag & 0x1f) == 0x1f) return std::nullopt;  // multi-byte tag

    std::size_t pos = 1;
    std::uint8_t first = data[pos++];
    std::size_t length = 0;
    if ((first & 0x80) == 0) {
        length = first;
    } else {
        std::size_t octets = first & 0x7f;
        if (octets == 0 || octets > 4 || pos + octets > data.size()) {
            return std::nullopt;  // indefinite or oversized length
        }
        for (std::size_t i = 0; i < octets; ++i) {
            length = length << 8 | data[pos++];
        }
    }
    if (length > data.size() - pos) return std::nullopt;
    el.content = data.subspan(pos, length);
    el.rest = data.subspan(pos + length);
    return el;
}

namespace {

/// serialNumber is the first INTEGER of tbsCertificate, after the optional
/// [0] EXPLICIT version.
std::optional<serial_number> cert_serial(const der_element& cert) {
    if (cert.tag != kTagSequence) return std::nullopt;
    auto tbs = der_read(cert.content);
    if (!tbs || tbs->tag != kTagSequence) return std::nullopt;

    auto field = der_read(tbs->content);
    if (!field) return std::nullopt;
    if (field->tag == kTagCtx0) {
        field = der_read(field->rest);
        if (!field) return std::nullopt;
    }
    if (field->tag != kTagInteger || field->content.empty()) {
        return std::nullopt;
    }
    return serial_number(field->content);
}

void collect_from_certificate_set(std::span<const std::uint8_t> set,
                                  std::vector<serial_number>& out) {
    std::span<const std::uint8_t> cursor = set;
    while (!cursor.empty()) {
        auto cert = der_read(cursor);
        if (!cert) return;
        if (auto serial = cert_serial(*cert)) {
            out.push_back(*serial);
        }
        cursor = cert->rest;
    }
}

void collect_from_signed_data(std::span<const std::uint8_t> signed_data,
                              std::vector<serial_number>& out) {
    // SignedData ::= SEQUENCE { version, digestAlgorithms, contentInfo,
    //                           certificates [0] IMPLICIT OPTIONAL, ... }
    auto seq = der_read(signed_data);
    if (!seq || seq->tag != kTagSequence) return;
    std::span<const std::uint8_t> cursor = seq->content;
    for (int i = 0; i < 3; ++i) {
        auto skipped = der_read(cursor);
        if (!skipped) return;
        cursor = skipped->rest;
    }
    auto certs = der_read(cursor);
    if (!certs || certs->tag != kTagCtx0) return;
    collect_from_certificate_set(certs->content, out);
}

} // namespace

std::vector<serial_number> extract_cert_serials(
    std::span<const std::uint8_t> der) {
    std::vector<serial_number> out;

    auto outer = der_read(der);
    if (!outer || outer->tag != kTagSequence) return out;

    auto first = der_read(outer->content);
    if (first && first->tag == kTagOid && is_signed_data_oid(first->content)) {
        // ContentInfo { contentType, [0] EXPLICIT content }
        auto wrapper = der_read(first->rest);
        if (wrapper && wrapper->tag == kTagCtx0) {
            collect_from_signed_data(wrapper->content, out);
        }
        return out;
    }

    // Fall back: treat the buffer as one bare certificate.
    if (auto serial = cert_serial(*outer)) {
        out.push_back(*serial);
    }
    return out;
}

} // namespace apksift
