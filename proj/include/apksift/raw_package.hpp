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

#ifndef APKSIFT_RAW_PACKAGE_HPP
#define APKSIFT_RAW_PACKAGE_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "apksift/serial.hpp"

namespace apksift {

enum class component_kind { activity, service, receiver, provider };

std::string_view component_kind_name(component_kind kind);

struct intent_filter_entry {
    std::string action;
    std::optional<std::int32_t> priority;

    bool operator==(const intent_filter_entry&) const = default;
};

struct component_entry {
    component_kind kind;
    std::string name;

    bool operator==(const component_entry&) const = default;
};

/// Manifest data reduced to what the feature extractor consumes.
/// Permission names are stored in short form ("SEND_SMS", not
/// "android.permission.SEND_SMS") and deduplicated.
struct raw_manifest {
    std::string app_name;
    std::set<std::string> requested_permissions;
    std::vector<intent_filter_entry> intent_filters;
    std::vector<component_entry> components;

    bool operator==(const raw_manifest&) const = default;
};

/// Strips a fully qualified permission name to its short form.
std::string normalize_permission(const std::string& name);

/// Everything the ingest stage pulls out of one package. dex_strings keeps
/// string_ids index order within each DEX file, files in archive order.
struct raw_package {
    std::string sha256;
    std::uint64_t size_bytes = 0;
    std::vector<serial_number> cert_serials;
    raw_manifest manifest;
    std::vector<std::string> dex_strings;

    bool operator==(const raw_package&) const = default;
};

} // namespace apksift

#endif
