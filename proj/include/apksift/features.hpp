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

#ifndef APKSIFT_FEATURES_HPP
#define APKSIFT_FEATURES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "apksift/raw_package.hpp"
#include "apksift/serial.hpp"

namespace apksift {

inline constexpr std::size_t kCriticalPermissionCount = 26;

enum class api_category {
    info_collect,
    web_access,
    sms_send,
    sms_delete,
    app_install,
    other,
};

std::string_view api_category_name(api_category c);
std::optional<api_category> api_category_from_name(const std::string& name);

struct suspicious_api {
    std::string id;        // simple-name token, e.g. "getDeviceId"
    char32_t symbol;       // alphabet character used in API strings
    api_category category = api_category::other;
};

/// The feature model: 26 critical permissions with their symbol alphabet,
/// the suspicious-API watchlist with its own alphabet, an API-to-permission
/// map, the root-command list, and the test-key serials. Immutable once
/// validated; shippable as a JSON file so the watchlist can be replaced
/// without code changes.
struct feature_config {
    std::vector<std::string> critical_permissions;  // exactly 26 short names
    std::vector<char32_t> permission_symbols;       // parallel, injective
    std::vector<suspicious_api> suspicious_apis;
    std::map<std::string, std::set<std::string>> api_permission_map;
    std::set<std::string> command_list;
    std::vector<std::string> sensitive_apis;  // the four info-collection APIs
    std::set<serial_number> test_key_serials;
    std::int32_t high_priority_floor = 1000;

    /// Throws errc::config_invalid on any invariant violation.
    void validate() const;

    /// Digest over the critical-permission list; stamped into profiles and
    /// models so mismatched artifacts are rejected instead of misread.
    std::string fingerprint() const;

    /// Index into the 26-permission vector, or -1 when not critical.
    int permission_index(const std::string& short_name) const;
};

feature_config default_config();
feature_config load_feature_config(const std::string& json_text);
std::string feature_config_to_json(const feature_config& cfg);

struct label_info {
    bool malicious = false;
    std::string family;  // empty for benign

    bool operator==(const label_info&) const = default;
};

/// Feature view of one application, the unit every downstream stage
/// consumes. Permission vectors are 0/1 over the critical-permission order
/// of the config whose fingerprint is stamped here.
struct app_profile {
    std::string sha256;
    std::vector<serial_number> serials;
    std::vector<std::uint8_t> requested_critical;
    std::vector<std::uint8_t> api_related_critical;
    std::u32string api_string;  // one symbol per occurrence, pool order
    std::set<std::string> commands;
    bool sends_sms = false;
    bool hides_sms = false;
    int sensitive_count = 0;
    std::optional<label_info> label;
    std::string cfg_fingerprint;
    /// audit trail: critical index -> suspicious APIs that implied it
    std::map<int, std::vector<std::string>> api_permission_witness;
};

app_profile extract_profile(const raw_package& raw, const feature_config& cfg);

/// Token-boundary containment: an occurrence of `token` whose neighbours
/// are string edges or non-identifier characters ([A-Za-z0-9_$] are
/// identifier characters). "sh" does not match inside "shell" but does
/// match in "/system/bin/sh".
bool contains_token(const std::string& haystack, const std::string& token);

} // namespace apksift

#endif
