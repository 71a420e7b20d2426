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

#ifndef APKSIFT_AXML_HPP
#define APKSIFT_AXML_HPP

#include <cstdint>
#include <span>

#include "apksift/raw_package.hpp"

namespace apksift {

/// Parses a binary AndroidManifest.xml (AXML chunk stream) into the reduced
/// manifest model: package/application name, requested permissions, intent
/// filters (action plus android:priority), and component names. Chunk types
/// outside that set are skipped by their declared size. Violations throw
/// errc::manifest_malformed with the byte offset of the offending chunk.
raw_manifest parse_axml(std::span<const std::uint8_t> data);

} // namespace apksift

#endif
