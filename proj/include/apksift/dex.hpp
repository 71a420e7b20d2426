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

#ifndef APKSIFT_DEX_HPP
#define APKSIFT_DEX_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace apksift {

/// Reads the string_ids table of a DEX file in index order. Checks the
/// header magic and bounds of every string_data_item; MUTF-8 decode errors
/// are replaced with U+FFFD rather than rejected (a scanner must survive
/// whatever its subject embeds). Structural violations throw
/// errc::dex_malformed tagged with `entry_name`.
std::vector<std::string> read_dex_strings(std::span<const std::uint8_t> data,
                                          const std::string& entry_name);

} // namespace apksift

#endif
