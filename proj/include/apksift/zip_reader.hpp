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

#ifndef APKSIFT_ZIP_READER_HPP
#define APKSIFT_ZIP_READER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace apksift {

/// Read-only view over a ZIP archive in memory. Entries are enumerated from
/// the central directory; data is located through the local header. Only
/// methods 0 (stored) and 8 (deflate) are supported, which covers APKs.
/// Structural violations throw errc::not_an_archive with the failing entry.
class zip_reader {
public:
    struct entry {
        std::string name;
        std::uint16_t method = 0;
        std::uint32_t compressed_size = 0;
        std::uint32_t uncompressed_size = 0;
        std::uint32_t local_header_offset = 0;
    };

    explicit zip_reader(std::span<const std::uint8_t> data);

    const std::vector<entry>& entries() const noexcept { return entries_; }

    /// nullptr when no entry has that exact name.
    const entry* find(const std::string& name) const;

    std::vector<std::uint8_t> read(const entry& e) const;

private:
    std::span<const std::uint8_t> data_;
    std::vector<entry> entries_;
};

} // namespace apksift

#endif
