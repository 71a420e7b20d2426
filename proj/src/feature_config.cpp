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

#include <nlohmann/json.hpp>

#include "apksift/error.hpp"
#include "apksift/ingest.hpp"
#include "apksift/unicode.hpp"

namespace apksift {

using nlohmann::json;

std::string_view api_category_name(api_category c) {
    switch (c) {
    case api_category::info_collect: return "info_collect";
    case api_category::web_access: return "web_access";
    case api_category::sms_send: return "sms_send";
    case api_category::sms_delete: return "sms_delete";
    case api_category::app_install: return "app_install";
    case api_category::other: return "other";
    }
    return "other";
}

std::optional<api_category> api_category_from_name(const std::string& name) {
    for (api_category c :
         {api_category::info_collect, api_category::web_access,
          api_category::sms_send, api_category::sms_delete,
          api_category::app_install, api_category::other}) {
        if (name == api_category_name(c)) return c;
    }
    return std::nullopt;
}

void feature_config::validate() const {
    if (critical_permissions.size() != kCriticalPermissionCount) {
        throw error(errc::config_invalid,
                    "expected 26 critical permissions, got " +
                        std::to_string(critical_permissions.size()));
    }
    if (permission_symbols.size() != critical_permissions.size()) {
        throw error(errc::config_invalid,
                    "permission symbol list does not match permission list");
    }
    std::set<std::string> names(critical_permissions.begin(),
                                critical_permissions.end());
    if (names.size() != critical_permissions.size()) {
        throw error(errc::config_invalid, "duplicate critical permission");
    }
    if (names.count("INTERNET") != 0) {
        throw error(errc::config_invalid,
                    "INTERNET must not be a critical permission");
    }
    if (names.count("INSTALL_PACKAGES") == 0) {
        throw error(errc::config_invalid,
                    "INSTALL_PACKAGES missing from critical permissions");
    }
    std::set<char32_t> perm_syms(permission_symbols.begin(),
                                 permission_symbols.end());
    if (perm_syms.size() != permission_symbols.size()) {
        throw error(errc::config_invalid,
                    "permission alphabet collision: symbols must be distinct");
    }
    std::set<char32_t> api_syms;
    std::set<std::string> api_ids;
    for (const auto& api : suspicious_apis) {
        if (!api_syms.insert(api.symbol).second) {
            throw error(errc::config_invalid,
                        "API alphabet collision at '" + api.id + "'");
        }
        if (!api_ids.insert(api.id).second) {
            throw error(errc::config_invalid,
                        "duplicate suspicious API '" + api.id + "'");
        }
    }
    for (const auto& s : sensitive_apis) {
        if (api_ids.count(s) == 0) {
            throw error(errc::config_invalid,
                        "sensitive API '" + s +
                            "' is not in the suspicious API list");
        }
    }
}

std::string feature_config::fingerprint() const {
    std::string joined;
    for (const auto& p : critical_permissions) {
        joined += p;
        joined += '\n';
    }
    return sha256_hex(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(joined.data()), joined.size()));
}

int feature_config::permission_index(const std::string& short_name) const {
    auto it = std::find(critical_permissions.begin(),
                        critical_permissions.end(), short_name);
    if (it == critical_permissions.end()) return -1;
    return static_cast<int>(it - critical_permissions.begin());
}

feature_config default_config() {
    feature_config cfg;
    // the 26 critical permissions, INTERNET excluded and INSTALL_PACKAGES
    // included; symbols A..Z in list order
    cfg.critical_permissions = {
        "ACCESS_COARSE_LOCATION",
        "ACCESS_FINE_LOCATION",
        "CALL_PHONE",
        "INSTALL_PACKAGES",
        "PROCESS_OUTGOING_CALLS",
        "READ_CONTACTS",
        "READ_SMS",
        "SEND_SMS",
        "WRITE_CONTACTS",
        "BLUETOOTH",
        "BLUETOOTH_ADMIN",
        "GET_ACCOUNTS",
        "MOUNT_UNMOUNT_FILESYSTEMS",
        "NFC",
        "READ_CALENDAR",
        "READ_HISTORY_BOOKMARKS",
        "READ_LOGS",
        "READ_PHONE_STATE",
        "RECEIVE_MMS",
        "RECEIVE_SMS",
        "RECEIVE_WAP_PUSH",
        "RECORD_AUDIO",
        "WRITE_CALENDAR",
        "WRITE_EXTERNAL_STORAGE",
        "WRITE_HISTORY_BOOKMARKS",
        "WRITE_SMS",
    };
    for (std::size_t i = 0; i < cfg.critical_permissions.size(); ++i) {
        cfg.permission_symbols.push_back(static_cast<char32_t>(U'A' + i));
    }

    cfg.suspicious_apis = {
        {"getDeviceId", U'G', api_category::info_collect},
        {"getLine1Number", U'L', api_category::info_collect},
        {"getSimSerialNumber", U'S', api_category::info_collect},
        {"getLastKnownLocation", U'K', api_category::info_collect},
        {"getSubscriberId", U'I', api_category::info_collect},
        {"getSimOperatorName", U'O', api_category::info_collect},
        {"getInstalledPackages", U'P', api_category::info_collect},
        {"openConnection", U'C', api_category::web_access},
        {"loadUrl", U'U', api_category::web_access},
        {"getInputStream", U'W', api_category::web_access},
        {"sendTextMessage", U'T', api_category::sms_send},
        {"sendMultipartTextMessage", U'M', api_category::sms_send},
        {"sendDataMessage", U'D', api_category::sms_send},
        {"abortBroadcast", U'A', api_category::sms_delete},
        {"installPackage", U'N', api_category::app_install},
        {"createFromPdu", U'F', api_category::other},
        {"getRuntime", U'R', api_category::other},
        {"exec", U'X', api_category::other},
        {"loadLibrary", U'V', api_category::other},
    };

    cfg.api_permission_map = {
        {"getDeviceId", {"READ_PHONE_STATE"}},
        {"getLine1Number", {"READ_PHONE_STATE"}},
        {"getSimSerialNumber", {"READ_PHONE_STATE"}},
        {"getSubscriberId", {"READ_PHONE_STATE"}},
        {"getLastKnownLocation",
         {"ACCESS_FINE_LOCATION", "ACCESS_COARSE_LOCATION"}},
        {"sendTextMessage", {"SEND_SMS"}},
        {"sendMultipartTextMessage", {"SEND_SMS"}},
        {"sendDataMessage", {"SEND_SMS"}},
        {"createFromPdu", {"RECEIVE_SMS"}},
        {"installPackage", {"INSTALL_PACKAGES"}},
        {"openConnection", {"INTERNET"}},
        {"loadUrl", {"INTERNET"}},
        {"getInputStream", {"INTERNET"}},
    };

    cfg.command_list = {"chmod",   "insmod", "su",      "mount",
                        "sh",      "killall", "reboot", "mkdir",
                        "getprop", "ln",      "ps",     "gingerbread",
                        "rageagainstthecage"};

    cfg.sensitive_apis = {"getDeviceId", "getLine1Number",
                          "getSimSerialNumber", "getLastKnownLocation"};

    cfg.test_key_serials = {
        serial_number::from_display("93:6e:ac:be:07:f2:01:df"),
        serial_number::from_display("b3:99:80:86:d0:56:cf:fa"),
    };
    cfg.high_priority_floor = 1000;
    return cfg;
}

namespace {

char32_t parse_symbol(const json& j, const std::string& path) {
    if (!j.is_string()) {
        throw error(errc::config_invalid, path + ": symbol must be a string");
    }
    std::u32string decoded = utf8_decode(j.get<std::string>());
    if (decoded.size() != 1) {
        throw error(errc::config_invalid,
                    path + ": symbol must be a single Unicode scalar value");
    }
    return decoded[0];
}

} // namespace

feature_config load_feature_config(const std::string& json_text) {
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw error(errc::config_invalid, "config is not a JSON object");
    }
    feature_config cfg;
    for (const auto& p : doc.at("critical_permissions")) {
        cfg.critical_permissions.push_back(p.at("name").get<std::string>());
        cfg.permission_symbols.push_back(
            parse_symbol(p.at("symbol"), "critical_permissions"));
    }
    for (const auto& a : doc.at("suspicious_apis")) {
        suspicious_api api;
        api.id = a.at("id").get<std::string>();
        api.symbol = parse_symbol(a.at("symbol"), "suspicious_apis");
        auto cat = api_category_from_name(a.at("category").get<std::string>());
        if (!cat) {
            throw error(errc::config_invalid,
                        "unknown API category for '" + api.id + "'");
        }
        api.category = *cat;
        cfg.suspicious_apis.push_back(std::move(api));
    }
    if (auto it = doc.find("api_permission_map"); it != doc.end()) {
        for (const auto& [api, perms] : it->items()) {
            std::set<std::string> set;
            for (const auto& p : perms) set.insert(p.get<std::string>());
            cfg.api_permission_map.emplace(api, std::move(set));
        }
    }
    for (const auto& c : doc.at("command_list")) {
        cfg.command_list.insert(c.get<std::string>());
    }
    for (const auto& s : doc.at("sensitive_apis")) {
        cfg.sensitive_apis.push_back(s.get<std::string>());
    }
    for (const auto& s : doc.at("test_key_serials")) {
        cfg.test_key_serials.insert(
            serial_number::from_display(s.get<std::string>()));
    }
    if (auto it = doc.find("high_priority_floor"); it != doc.end()) {
        cfg.high_priority_floor = it->get<std::int32_t>();
    }
    cfg.validate();
    return cfg;
}

std::string feature_config_to_json(const feature_config& cfg) {
    json doc;
    doc["format_version"] = 1;
    json perms = json::array();
    for (std::size_t i = 0; i < cfg.critical_permissions.size(); ++i) {
        perms.push_back({{"name", cfg.critical_permissions[i]},
                         {"symbol", utf8_encode(cfg.permission_symbols[i])}});
    }
    doc["critical_permissions"] = std::move(perms);
    json apis = json::array();
    for (const auto& a : cfg.suspicious_apis) {
        apis.push_back({{"id", a.id},
                        {"symbol", utf8_encode(a.symbol)},
                        {"category", std::string(api_category_name(a.category))}});
    }
    doc["suspicious_apis"] = std::move(apis);
    json map = json::object();
    for (const auto& [api, set] : cfg.api_permission_map) {
        map[api] = set;
    }
    doc["api_permission_map"] = std::move(map);
    doc["command_list"] = cfg.command_list;
    doc["sensitive_apis"] = cfg.sensitive_apis;
    json keys = json::array();
    for (const auto& s : cfg.test_key_serials) keys.push_back(s.display());
    doc["test_key_serials"] = std::move(keys);
    doc["high_priority_floor"] = cfg.high_priority_floor;
    return doc.dump(2) + "\n";
}

} // namespace apksift
