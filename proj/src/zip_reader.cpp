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

#include "apksift/zip_reader.hpp"
#include "apksift/error.hpp"

#include <cstring>
#include <zlib.h>

namespace apksift {

namespace {

constexpr std::uint32_t kEocdSig = 0x06054b50;  // PK\x05\x06
constexpr std::uint32_t kCenSig = 0x02014b50;   // PK\x01\x02
constexpr std::uint32_t kLocSig = 0x04034b50;   // PK\x03\x04
constexpr std::size_t kEocdMinLen = 22;

std::uint16_t read_u16(std::span<const std::uint8_t> d, std::size_t off) {
    return static_cast<std::uint16_t>(d[off] | d[off + 1] << 8);
}

std::uint32_t read_u32(std::span<const std::uint8_t> d, std::size_t off) {
    return static_cast<std::uint32_t>(d[off]) |
           static_cast<std::uint32_t>(d[off + 1]) << 8 |
           static_cast<std::uint32_t>(d[off + 2]) << 16 |
           static_cast<std::uint32_t>(d[off + 3]) << 24;
}

[[noreturn]] void fail(const std::string& what) {
    throw error(errc::not_an_archive, what);
}

std::vector<std::uint8_t> inflate_raw(std::span<const std::uint8_t> in,
                                      std::uint32_t expected_size,
                                      const std::string& entry_name) {
    std::vector<std::uint8_t> out(expected_size);
    z_stream zs{};
    // negative window bits: raw deflate stream, no zlib header
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
        fail("entry '" + entry_name + "': inflate init failed");
    }
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    std::size_t produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected_size) {
        fail("entry '" + entry_name + "': corrupt deflate stream");
    }
    return out;
}

} // namespace

zip_reader::zip_reader(std::span<const std::uint8_t> data) : data_(data) {
    if (data.size() < kEocdMinLen) {
        fail("input too small to hold an end-of-central-directory record");
    }
    // EOCD sits at the end, possibly followed by a comment of up to 64K.
    std::size_t scan_floor =
        data.size() > kEocdMinLen + 0xffff ? data.size() - kEocdMinLen - 0xffff : 0;
    std::size_t eocd = data.size();  // sentinel: not found
    for (std::size_t pos = data.size() - kEocdMinLen + 1; pos-- > scan_floor;) {
        if (read_u32(data, pos) == kEocdSig) {
            std::uint16_t comment_len = read_u16(data, pos + 20);
            if (pos + kEocdMinLen + comment_len == data.size()) {
                eocd = pos;
                break;
            }
        }
    }
    if (eocd == data.size()) {
        fail("no end-of-central-directory record (bad ZIP magic)");
    }

    std::uint16_t entry_count = read_u16(data, eocd + 10);
    std::uint32_t cen_size = read_u32(data, eocd + 12);
    std::uint32_t cen_offset = read_u32(data, eocd + 16);
    if (static_cast<std::uint64_t>(cen_offset) + cen_size > eocd) {
        fail("central directory extends past its own end record");
    }

    std::size_t pos = cen_offset;
    entries_.reserve(entry_count);
    for (std::uint16_t i = 0; i < entry_count; ++i) {
        if (pos + 46 > eocd || read_u32(data, pos) != kCenSig) {
            fail("truncated central directory at record " + std::to_string(i));
        }
        entry e;
        e.method = read_u16(data, pos + 10);
        e.compressed_size = read_u32(data, pos + 20);
        e.uncompressed_size = read_u32(data, pos + 24);
        std::uint16_t name_len = read_u16(data, pos + 28);
        std::uint16_t extra_len = read_u16(data, pos + 30);
        std::uint16_t comment_len = read_u16(data, pos + 32);
        e.local_header_offset = read_u32(data, pos + 42);
        if (pos + 46 + name_len > eocd) {
            fail("entry name runs past the central directory");
        }
        e.name.assign(reinterpret_cast<const char*>(data.data() + pos + 46),
                      name_len);
        entries_.push_back(std::move(e));
        pos += 46u + name_len + extra_len + comment_len;
    }
}

const zip_reader::entry* zip_reader::find(const std::string& name) const {
    for (const auto& e : entries_) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

std::vector<std::uint8_t> zip_reader::read(const entry& e) const {
    std::size_t lh = e.local_header_offset;
    if (lh + 30 > data_.size() || read_u32(data_, lh) != kLocSig) {
        fail("entry '" + e.name + "': bad local header");
    }
    // name/extra lengths in the local header may differ from the central
    // directory copy; trust the local ones for locating the payload.
    std::uint16_t name_len = read_u16(data_, lh + 26);
    std::uint16_t extra_len = read_u16(data_, lh + 28);
    std::size_t payload = lh + 30u + name_len + extra_len;
    if (payload + e.compressed_size > data_.size()) {
        fail("entry '" + e.name + "': payload truncated");
    }
    std::span<const std::uint8_t> raw = data_.subspan(payload, e.compressed_size);
    switch (e.method) {
    case 0:
        if (e.compressed_size != e.uncompressed_size) {
            fail("entry '" + e.name + "': stored sizes disagree");
        }
        return {raw.begin(), raw.end()};
    case 8:
        return inflate_raw(raw, e.uncompressed_size, e.name);
    default:
        fail("entry '" + e.name + "': unsupported compression method " +
             std::to_string(e.method));
    }
}

} // namespace apksift
