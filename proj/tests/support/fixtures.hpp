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

// Test-only builders for APK/DEX/AXML/DER fixtures, written independently
// of the production parsers so round-trip checks are meaningful, plus the
// brute-force oracles the similarity tests compare against.

#ifndef APKSIFT_TESTS_FIXTURES_HPP
#define APKSIFT_TESTS_FIXTURES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fixtures {

// ---- DER ------------------------------------------------------------

std::vector<std::uint8_t> der_tlv(std::uint8_t tag,
                                  const std::vector<std::uint8_t>& content);

/// Minimal X.509-shaped certificate whose tbsCertificate carries a [0]
/// version field followed by a serialNumber INTEGER with exactly these
/// content octets.
std::vector<std::uint8_t> der_certificate(
    const std::vector<std::uint8_t>& serial_content);

/// PKCS#7 SignedData wrapping the given certificates.
std::vector<std::uint8_t> pkcs7_signed_data(
    const std::vector<std::vector<std::uint8_t>>& certificates);

// ---- DEX ------------------------------------------------------------

/// DEX file holding exactly this string pool in this order.
std::vector<std::uint8_t> dex_file(const std::vector<std::string>& pool);

// ---- AXML -----------------------------------------------------------

struct axml_filter {
    std::string action;
    std::optional<std::int32_t> priority;
};

struct axml_component {
    std::string kind;  // element name: activity/service/receiver/provider
    std::string name;
    std::vector<axml_filter> filters;
};

struct axml_doc {
    std::string package;
    std::string label;
    std::vector<std::string> permissions;  // fully qualified names
    std::vector<axml_component> components;
};

std::vector<std::uint8_t> axml_manifest(const axml_doc& doc);

// ---- ZIP / APK -------------------------------------------------------

struct zip_entry_spec {
    std::string name;
    std::vector<std::uint8_t> data;
    bool deflate = false;
};

std::vector<std::uint8_t> zip_archive(
    const std::vector<zip_entry_spec>& entries);

struct apk_spec {
    std::vector<std::vector<std::uint8_t>> cert_serial_contents;
    axml_doc manifest;
    std::vector<std::vector<std::string>> dex_pools;
    bool deflate_manifest = true;
};

std::vector<std::uint8_t> apk(const apk_spec& spec);

// ---- brute-force oracles ----------------------------------------------

/// Plain recursive longest-common-subsequence length.
std::size_t lcs_recursive(const std::u32string& a, const std::u32string& b);

/// Plain recursive Levenshtein distance.
std::size_t levenshtein_recursive(const std::u32string& a,
                                  const std::u32string& b);

/// Independent token-boundary scanner ([A-Za-z0-9_$] are identifier
/// characters).
bool token_scan(const std::string& haystack, const std::string& token);

} // namespace fixtures

#endif
