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

#ifndef APKSIFT_INGEST_HPP
#define APKSIFT_INGEST_HPP

#include <cstdint>
#include <span>
#include <string>

#include "apksift/raw_package.hpp"

namespace apksift {

std::string sha256_hex(std::span<const std::uint8_t> data);

/// Parses an APK buffer: certificate serials from every META-INF signature
/// block (.RSA/.DSA/.EC), the binary AndroidManifest.xml, and the string
/// pool of every classes*.dex entry in archive order. Pure function of the
/// buffer; throws the ingest error taxonomy on structural violations.
raw_package parse_apk(std::span<const std::uint8_t> bytes);

/// Loads a Profile File Format document (UTF-8 JSON). Absent fields default
/// to empty collections; unknown fields are ignored. Serial strings and
/// permission names are normalized on load. Throws errc::schema_violation
/// with the offending field path.
raw_package load_profile(const std::string& text);

/// Serializes a raw package as a Profile File Format document. The output
/// is deterministic (sorted keys, two-space indent, trailing newline) so
/// re-extraction is byte-identical.
std::string profile_to_json(const raw_package& pkg);

} // namespace apksift

#endif
