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

#include "apksift/ingest.hpp"

#include <algorithm>
#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "apksift/axml.hpp"
#include "apksift/der.hpp"
#include "apksift/dex.hpp"
#include "apksift/error.hpp"
#include "apksift/zip_reader.hpp"

namespace apksift {

using nlohmann::json;

std::string sha256_hex(std::span<const std::uint8_t> data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0f]);
    }
    return out;
}

namespace {

bool has_suffix_ci(const std::string& name, const char* suffix) {
    std::size_t n = std::string(suffix).size();
    if (name.size() < n) return false;
    for (std::size_t i = 0; i < n; ++i) {
        char a = name[name.size() - n + i];
        char b = suffix[i];
        if (std::tolower(static_cast<unsigned char>(a)) !=
            std::tolower(static_cast<unsigned char>(b))) {
            return false;
        }
    }
    return true;
}

bool is_signature_block(const std::string& name) {
    if (name.rfind("META-INF/", 0) != 0) return false;
    return has_suffix_ci(name, ".rsa") || has_suffix_ci(name, ".dsa") ||
           has_suffix_ci(name, ".ec");
}

bool is_classes_dex(const std::string& name) {
    // classes.dex, classes2.dex, ... at archive root
    if (name.rfind("classes", 0) != 0 || !has_suffix_ci(name, ".dex")) {
        return false;
    }
    for (std::size_t i = 7; i + 4 < name.size(); ++i) {
        if (name[i] < '0' || name[i] > '9') return false;
    }
    return true;
}

} // namespace

raw_package parse_apk(std::span<const std::uint8_t> bytes) {
    raw_package pkg;
    pkg.sha256 = sha256_hex(bytes);
    pkg.size_bytes = bytes.size();

    zip_reader zip(bytes);

    bool saw_signature_block = false;
    for (const auto& e : zip.entries()) {
        if (!is_signature_block(e.name)) continue;
        saw_signature_block = true;
        auto der = zip.read(e);
        auto serials = extract_cert_serials(der);
        for (auto& s : serials) {
            if (std::find(pkg.cert_serials.begin(), pkg.cert_serials.end(),
                          s) == pkg.cert_serials.end()) {
                pkg.cert_serials.push_back(std::move(s));
            }
        }
    }
    if (!saw_signature_block || pkg.cert_serials.empty()) {
        throw error(errc::no_certificate,
                    saw_signature_block
                        ? "META-INF signature blocks held no certificate"
                        : "no META-INF signature block in archive");
    }

    const auto* manifest_entry = zip.find("AndroidManifest.xml");
    if (manifest_entry == nullptr) {
        throw error(errc::manifest_missing, "AndroidManifest.xml");
    }
    auto manifest_bytes = zip.read(*manifest_entry);
    pkg.manifest = parse_axml(manifest_bytes);

    for (const auto& e : zip.entries()) {
        if (!is_classes_dex(e.name)) continue;
        auto dex = zip.read(e);
        auto strings = read_dex_strings(dex, e.name);
        pkg.dex_strings.insert(pkg.dex_strings.end(),
                               std::make_move_iterator(strings.begin()),
                               std::make_move_iterator(strings.end()));
    }
    return pkg;
}

namespace {

[[noreturn]] void bad_field(const std::string& path, const char* what) {
    throw error(errc::schema_violation, path + ": " + what);
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) bad_field(path, "expected a string");
    return j.get<std::string>();
}

} // namespace

raw_package load_profile(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw error(errc::schema_violation, "document: not a JSON object");
    }

    raw_package pkg;
    if (auto it = doc.find("sha256"); it != doc.end()) {
        std::string sha = get_string(*it, "sha256");
        if (sha.size() != 64 ||
            sha.find_first_not_of("0123456789abcdef") != std::string::npos) {
            bad_field("sha256", "expected 64 lowercase hex characters");
        }
        pkg.sha256 = sha;
    }
    if (auto it = doc.find("size_bytes"); it != doc.end()) {
        if (!it->is_number_unsigned()) {
            bad_field("size_bytes", "expected a non-negative integer");
        }
        pkg.size_bytes = it->get<std::uint64_t>();
    }
    if (auto it = doc.find("name"); it != doc.end()) {
        pkg.manifest.app_name = get_string(*it, "name");
    }
    if (auto it = doc.find("cert_serials"); it != doc.end()) {
        if (!it->is_array()) bad_field("cert_serials", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            std::string path = "cert_serials[" + std::to_string(i) + "]";
            serial_number s =
                serial_number::from_display(get_string((*it)[i], path));
            if (std::find(pkg.cert_serials.begin(), pkg.cert_serials.end(),
                          s) == pkg.cert_serials.end()) {
                pkg.cert_serials.push_back(std::move(s));
            }
        }
    }
    if (auto it = doc.find("requested_permissions"); it != doc.end()) {
        if (!it->is_array()) {
            bad_field("requested_permissions", "expected an array");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            std::string path =
                "requested_permissions[" + std::to_string(i) + "]";
            pkg.manifest.requested_permissions.insert(
                normalize_permission(get_string((*it)[i], path)));
        }
    }
    if (auto it = doc.find("intent_filters"); it != doc.end()) {
        if (!it->is_array()) bad_field("intent_filters", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            std::string path = "intent_filters[" + std::to_string(i) + "]";
            const json& f = (*it)[i];
            if (!f.is_object()) bad_field(path, "expected an object");
            intent_filter_entry entry;
            if (auto a = f.find("action"); a != f.end()) {
                entry.action = get_string(*a, path + ".action");
            }
            if (auto p = f.find("priority"); p != f.end() && !p->is_null()) {
                if (!p->is_number_integer()) {
                    bad_field(path + ".priority", "expected an integer");
                }
                entry.priority = p->get<std::int32_t>();
            }
            pkg.manifest.intent_filters.push_back(std::move(entry));
        }
    }
    if (auto it = doc.find("dex_strings"); it != doc.end()) {
        if (!it->is_array()) bad_field("dex_strings", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            std::string path = "dex_strings[" + std::to_string(i) + "]";
            pkg.dex_strings.push_back(get_string((*it)[i], path));
        }
    }
    return pkg;
}

std::string profile_to_json(const raw_package& pkg) {
    json doc;
    doc["sha256"] = pkg.sha256;
    doc["size_bytes"] = pkg.size_bytes;
    doc["name"] = pkg.manifest.app_name;
    json serials = json::array();
    for (const auto& s : pkg.cert_serials) serials.push_back(s.display());
    doc["cert_serials"] = std::move(serials);
    json perms = json::array();
    for (const auto& p : pkg.manifest.requested_permissions) perms.push_back(p);
    doc["requested_permissions"] = std::move(perms);
    json filters = json::array();
    for (const auto& f : pkg.manifest.intent_filters) {
        json entry;
        entry["action"] = f.action;
        if (f.priority) entry["priority"] = *f.priority;
        filters.push_back(std::move(entry));
    }
    doc["intent_filters"] = std::move(filters);
    doc["dex_strings"] = pkg.dex_strings;
    return doc.dump(2) + "\n";
}

} // namespace apksift
