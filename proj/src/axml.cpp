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

#include "apksift/axml.hpp"
#include "apksift/error.hpp"

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace apksift {

namespace {

constexpr std::uint16_t kResXmlType = 0x0003;
constexpr std::uint16_t kResStringPoolType = 0x0001;
constexpr std::uint16_t kResXmlResourceMapType = 0x0180;
constexpr std::uint16_t kResXmlStartNamespaceType = 0x0100;
constexpr std::uint16_t kResXmlEndNamespaceType = 0x0101;
constexpr std::uint16_t kResXmlStartElementType = 0x0102;
constexpr std::uint16_t kResXmlEndElementType = 0x0103;
constexpr std::uint16_t kResXmlCdataType = 0x0104;

constexpr std::uint32_t kNullRef = 0xffffffff;
constexpr std::uint32_t kStringPoolUtf8Flag = 1u << 8;

// typed value data types (subset we interpret)
constexpr std::uint8_t kTypeString = 0x03;
constexpr std::uint8_t kTypeIntDec = 0x10;
constexpr std::uint8_t kTypeIntHex = 0x11;
constexpr std::uint8_t kTypeIntBool = 0x12;

[[noreturn]] void fail(std::size_t offset, const std::string& what) {
    throw error(errc::manifest_malformed,
                what + " (offset " + std::to_string(offset) + ")");
}

class cursor {
public:
    cursor(std::span<const std::uint8_t> data, std::size_t pos)
        : data_(data), pos_(pos) {}

    std::size_t pos() const { return pos_; }

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }

    std::uint16_t u16() {
        need(2);
        std::uint16_t v =
            static_cast<std::uint16_t>(data_[pos_] | data_[pos_ + 1] << 8);
        pos_ += 2;
        return v;
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = static_cast<std::uint32_t>(data_[pos_]) |
                          static_cast<std::uint32_t>(data_[pos_ + 1]) << 8 |
                          static_cast<std::uint32_t>(data_[pos_ + 2]) << 16 |
                          static_cast<std::uint32_t>(data_[pos_ + 3]) << 24;
        pos_ += 4;
        return v;
    }

    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }

private:
    void need(std::size_t n) {
        if (n > data_.size() - pos_ || pos_ > data_.size()) {
            fail(pos_, "read past end of chunk stream");
        }
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_;
};

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp <= 0x7f) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7ff) {
        out.push_back(static_cast<char>(0xc0 | cp >> 6));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp <= 0xffff) {
        out.push_back(static_cast<char>(0xe0 | cp >> 12));
        out.push_back(static_cast<char>(0x80 | (cp >> 6 & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | cp >> 18));
        out.push_back(static_cast<char>(0x80 | (cp >> 12 & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp >> 6 & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

std::string utf16le_to_utf8(std::span<const std::uint8_t> units,
                            std::size_t count) {
    std::string out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t u =
            static_cast<std::uint32_t>(units[2 * i] | units[2 * i + 1] << 8);
        if (u >= 0xd800 && u <= 0xdbff && i + 1 < count) {
            std::uint32_t lo = static_cast<std::uint32_t>(units[2 * i + 2] |
                                                          units[2 * i + 3] << 8);
            if (lo >= 0xdc00 && lo <= 0xdfff) {
                u = 0x10000 + ((u - 0xd800) << 10) + (lo - 0xdc00);
                ++i;
            } else {
                u = 0xfffd;
            }
        } else if (u >= 0xd800 && u <= 0xdfff) {
            u = 0xfffd;  // lone surrogate
        }
        append_utf8(out, u);
    }
    return out;
}

/// Decoded ResStringPool chunk. Strings are converted to UTF-8 up front.
class string_pool {
public:
    string_pool() = default;

    string_pool(std::span<const std::uint8_t> data, std::size_t chunk_start,
                std::uint32_t chunk_size, std::uint16_t header_size) {
        cursor cur(data, chunk_start + 8);
        std::uint32_t string_count = cur.u32();
        cur.u32();  // style count, styles are irrelevant here
        std::uint32_t flags = cur.u32();
        std::uint32_t strings_start = cur.u32();
        cur.u32();  // styles start
        bool utf8 = (flags & kStringPoolUtf8Flag) != 0;

        if (strings_start > chunk_size) {
            fail(chunk_start, "string data starts past the pool chunk");
        }
        std::size_t offsets_at = chunk_start + header_size;
        std::size_t data_at = chunk_start + strings_start;
        std::size_t chunk_end = chunk_start + chunk_size;

        cursor offs(data, offsets_at);
        strings_.reserve(string_count);
        for (std::uint32_t i = 0; i < string_count; ++i) {
            std::uint32_t rel = offs.u32();
            std::size_t at = data_at + rel;
            if (at >= chunk_end) {
                fail(offsets_at + 4u * i, "string offset outside pool");
            }
            strings_.push_back(utf8 ? decode_utf8(data, at, chunk_end)
                                    : decode_utf16(data, at, chunk_end));
        }
    }

    /// Null reference or out-of-range index resolves to empty.
    std::string get(std::uint32_t index) const {
        if (index == kNullRef || index >= strings_.size()) return {};
        return strings_[index];
    }

private:
    static std::string decode_utf16(std::span<const std::uint8_t> data,
                                    std::size_t at, std::size_t end) {
        cursor cur(data, at);
        std::uint32_t len = cur.u16();
        if (len & 0x8000) {
            len = (len & 0x7fff) << 16 | cur.u16();
        }
        if (cur.pos() + 2ull * len > end) {
            fail(at, "UTF-16 string runs past pool");
        }
        return utf16le_to_utf8(data.subspan(cur.pos(), 2ull * len), len);
    }

    static std::string decode_utf8(std::span<const std::uint8_t> data,
                                   std::size_t at, std::size_t end) {
        // utf16 length first, then byte length; both 1 or 2 byte varints
        std::size_t pos = at;
        auto read_len = [&data, &pos, end]() {
            if (pos >= end) fail(pos, "UTF-8 string header truncated");
            std::uint32_t v = data[pos++];
            if (v & 0x80) {
                if (pos >= end) fail(pos, "UTF-8 string header truncated");
                v = (v & 0x7f) << 8 | data[pos++];
            }
            return v;
        };
        read_len();  // utf16 unit count, unused
        std::uint32_t byte_len = read_len();
        if (pos + byte_len > end) {
            fail(at, "UTF-8 string runs past pool");
        }
        return std::string(reinterpret_cast<const char*>(data.data() + pos),
                           byte_len);
    }

    std::vector<std::string> strings_;
};

struct typed_value {
    std::uint32_t raw_index = kNullRef;
    std::uint8_t data_type = 0;
    std::uint32_t data = 0;
};

struct attribute {
    std::string name;
    typed_value value;
};

std::optional<std::string> attr_string(const string_pool& pool,
                                       const attribute& a) {
    if (a.value.data_type == kTypeString) {
        return pool.get(a.value.data);
    }
    if (a.value.raw_index != kNullRef) {
        return pool.get(a.value.raw_index);
    }
    return std::nullopt;
}

std::optional<std::int32_t> attr_int(const string_pool& pool,
                                     const attribute& a) {
    switch (a.value.data_type) {
    case kTypeIntDec:
    case kTypeIntHex:
    case kTypeIntBool:
        return static_cast<std::int32_t>(a.value.data);
    default:
        break;
    }
    if (auto s = attr_string(pool, a); s && !s->empty()) {
        char* end = nullptr;
        long v = std::strtol(s->c_str(), &end, 10);
        if (end && *end == '\0') return static_cast<std::int32_t>(v);
    }
    return std::nullopt;
}

std::optional<component_kind> component_kind_for(const std::string& element) {
    if (element == "activity") return component_kind::activity;
    if (element == "service") return component_kind::service;
    if (element == "receiver") return component_kind::receiver;
    if (element == "provider") return component_kind::provider;
    return std::nullopt;
}

} // namespace

std::string normalize_permission(const std::string& name) {
    auto dot = name.rfind('.');
    return dot == std::string::npos ? name : name.substr(dot + 1);
}

std::string_view component_kind_name(component_kind kind) {
    switch (kind) {
    case component_kind::activity: return "activity";
    case component_kind::service: return "service";
    case component_kind::receiver: return "receiver";
    case component_kind::provider: return "provider";
    }
    return "?";
}

raw_manifest parse_axml(std::span<const std::uint8_t> data) {
    cursor head(data, 0);
    std::uint16_t doc_type = head.u16();
    std::uint16_t doc_header_size = head.u16();
    std::uint32_t doc_size = head.u32();
    if (doc_type != kResXmlType) {
        fail(0, "not a binary XML document");
    }
    if (doc_size > data.size() || doc_header_size < 8) {
        fail(0, "document size exceeds buffer");
    }

    raw_manifest out;
    string_pool pool;
    bool saw_pool = false;
    std::string package_name;
    std::string application_label;

    // current element nesting; tracks the enclosing intent-filter priority
    std::vector<std::string> stack;
    std::optional<std::int32_t> filter_priority;
    bool in_filter = false;

    std::size_t pos = doc_header_size;
    while (pos + 8 <= doc_size) {
        cursor cur(data, pos);
        std::uint16_t type = cur.u16();
        std::uint16_t header_size = cur.u16();
        std::uint32_t size = cur.u32();
        if (size < 8 || header_size < 8 || header_size > size ||
            pos + size > doc_size) {
            fail(pos, "chunk size violates stream bounds");
        }

        switch (type) {
        case kResStringPoolType:
            if (header_size < 28) fail(pos, "string pool header too small");
            pool = string_pool(data, pos, size, header_size);
            saw_pool = true;
            break;

        case kResXmlStartElementType: {
            if (!saw_pool) fail(pos, "element before string pool");
            cursor el(data, pos + header_size);
            el.u32();  // namespace ref
            std::string name = pool.get(el.u32());
            std::size_t attr_ext = pos + header_size;
            cursor ext(data, attr_ext + 8);
            std::uint16_t attr_start = ext.u16();
            std::uint16_t attr_size = ext.u16();
            std::uint16_t attr_count = ext.u16();
            if (attr_size < 20) fail(pos, "attribute record too small");

            std::vector<attribute> attrs;
            attrs.reserve(attr_count);
            for (std::uint16_t i = 0; i < attr_count; ++i) {
                std::size_t at = attr_ext + attr_start +
                                 static_cast<std::size_t>(i) * attr_size;
                if (at + 20 > pos + size) {
                    fail(at, "attribute table runs past element chunk");
                }
                cursor ac(data, at);
                ac.u32();  // attribute namespace, matched by name only
                attribute a;
                a.name = pool.get(ac.u32());
                a.value.raw_index = ac.u32();
                ac.u16();  // typed value size
                ac.u8();   // res0
                a.value.data_type = ac.u8();
                a.value.data = ac.u32();
                attrs.push_back(std::move(a));
            }

            auto find_attr = [&attrs](const char* wanted) -> const attribute* {
                for (const auto& a : attrs) {
                    if (a.name == wanted) return &a;
                }
                return nullptr;
            };

            if (name == "manifest") {
                if (const auto* a = find_attr("package")) {
                    if (auto s = attr_string(pool, *a)) package_name = *s;
                }
            } else if (name == "application") {
                if (const auto* a = find_attr("label")) {
                    if (auto s = attr_string(pool, *a)) application_label = *s;
                }
            } else if (name == "uses-permission") {
                if (const auto* a = find_attr("name")) {
                    if (auto s = attr_string(pool, *a); s && !s->empty()) {
                        out.requested_permissions.insert(
                            normalize_permission(*s));
                    }
                }
            } else if (auto kind = component_kind_for(name)) {
                if (const auto* a = find_attr("name")) {
                    if (auto s = attr_string(pool, *a); s && !s->empty()) {
                        out.components.push_back({*kind, *s});
                    }
                }
            } else if (name == "intent-filter") {
                in_filter = true;
                filter_priority.reset();
                if (const auto* a = find_attr("priority")) {
                    filter_priority = attr_int(pool, *a);
                }
            } else if (name == "action" && in_filter) {
                if (const auto* a = find_attr("name")) {
                    if (auto s = attr_string(pool, *a); s && !s->empty()) {
                        out.intent_filters.push_back({*s, filter_priority});
                    }
                }
            }
            stack.push_back(name);
            break;
        }

        case kResXmlEndElementType: {
            if (!stack.empty()) {
                if (stack.back() == "intent-filter") {
                    in_filter = false;
                    filter_priority.reset();
                }
                stack.pop_back();
            }
            break;
        }

        case kResXmlResourceMapType:
        case kResXmlStartNamespaceType:
        case kResXmlEndNamespaceType:
        case kResXmlCdataType:
        default:
            break;  // skipped by declared size
        }

        pos += size;
    }

    out.app_name = !application_label.empty() ? application_label : package_name;
    return out;
}

} // namespace apksift
