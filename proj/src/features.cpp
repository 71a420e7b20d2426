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

#include "apksift/features.hpp"

#include <algorithm>

#include "apksift/error.hpp"

namespace apksift {

namespace {

bool is_identifier_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '$';
}

/// Positions of token-boundary occurrences of `token` in `s`, ascending.
void token_positions(const std::string& s, const std::string& token,
                     std::vector<std::size_t>& out) {
    if (token.empty() || token.size() > s.size()) return;
    std::size_t pos = 0;
    while ((pos = s.find(token, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !is_identifier_char(s[pos - 1]);
        std::size_t end = pos + token.size();
        bool right_ok = end == s.size() || !is_identifier_char(s[end]);
        if (left_ok && right_ok) out.push_back(pos);
        ++pos;
    }
}

} // namespace

bool contains_token(const std::string& haystack, const std::string& token) {
    std::vector<std::size_t> hits;
    token_positions(haystack, token, hits);
    return !hits.empty();
}

app_profile extract_profile(const raw_package& raw,
                            const feature_config& cfg) {
    cfg.validate();

    const std::size_t dim = cfg.critical_permissions.size();
    app_profile p;
    p.sha256 = raw.sha256;
    p.serials = raw.cert_serials;
    p.cfg_fingerprint = cfg.fingerprint();
    p.requested_critical.assign(dim, 0);
    p.api_related_critical.assign(dim, 0);

    for (std::size_t j = 0; j < dim; ++j) {
        if (raw.manifest.requested_permissions.count(
                cfg.critical_permissions[j]) != 0) {
            p.requested_critical[j] = 1;
        }
    }

    // One pass over the pool: every suspicious-API occurrence (by token
    // boundary) contributes one symbol, ordered by pool index then by
    // position inside the string.
    std::set<std::string> apis_present;
    std::vector<std::size_t> hits;
    for (const auto& s : raw.dex_strings) {
        std::vector<std::pair<std::size_t, char32_t>> in_string;
        for (const auto& api : cfg.suspicious_apis) {
            hits.clear();
            token_positions(s, api.id, hits);
            if (!hits.empty()) apis_present.insert(api.id);
            for (std::size_t pos : hits) {
                in_string.emplace_back(pos, api.symbol);
            }
        }
        std::sort(in_string.begin(), in_string.end());
        for (const auto& [pos, symbol] : in_string) {
            p.api_string.push_back(symbol);
        }
    }

    for (const auto& api : apis_present) {
        auto mapped = cfg.api_permission_map.find(api);
        if (mapped == cfg.api_permission_map.end()) continue;
        for (const auto& perm : mapped->second) {
            int j = cfg.permission_index(perm);
            if (j < 0) continue;  // mapped permission is not critical
            p.api_related_critical[static_cast<std::size_t>(j)] = 1;
            p.api_permission_witness[j].push_back(api);
        }
    }

    for (const auto& cmd : cfg.command_list) {
        for (const auto& s : raw.dex_strings) {
            if (contains_token(s, cmd)) {
                p.commands.insert(cmd);
                break;
            }
        }
    }

    // sendTextMessage / abortBroadcast matter even when a custom config
    // drops them from the watchlist, so scan for them directly
    auto string_present = [&raw](const std::string& token) {
        return std::any_of(
            raw.dex_strings.begin(), raw.dex_strings.end(),
            [&token](const std::string& s) { return contains_token(s, token); });
    };

    p.sends_sms = string_present("sendTextMessage");

    bool high_priority_sms_filter = std::any_of(
        raw.manifest.intent_filters.begin(), raw.manifest.intent_filters.end(),
        [&cfg](const intent_filter_entry& f) {
            return f.priority && *f.priority >= cfg.high_priority_floor &&
                   f.action.ends_with("SMS_RECEIVED");
        });
    p.hides_sms = high_priority_sms_filter && string_present("abortBroadcast");

    for (const auto& api : cfg.sensitive_apis) {
        if (apis_present.count(api) != 0) ++p.sensitive_count;
    }
    return p;
}

} // namespace apksift
