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

#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <zlib.h>

namespace fixtures {

namespace {

using bytes = std::vector<std::uint8_t>;

void put_u16(bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8 & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 16 & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 24 & 0xff));
}

void patch_u32(bytes& out, std::size_t at, std::uint32_t v) {
    out[at] = static_cast<std::uint8_t>(v & 0xff);
    out[at + 1] = static_cast<std::uint8_t>(v >> 8 & 0xff);
    out[at + 2] = static_cast<std::uint8_t>(v >> 16 & 0xff);
    out[at + 3] = static_cast<std::uint8_t>(v >> 24 & 0xff);
}

} // namespace

// ---- DER ------------------------------------------------------------

std::vector<std::uint8_t> der_tlv(std::uint8_t tag, const bytes& content) {
    bytes out;
    out.push_back(tag);
    std::size_t len = content.size();
    if (len < 0x80) {
        out.push_back(static_cast<std::uint8_t>(len));
    } else if (len <= 0xff) {
        out.push_back(0x81);
        out.push_back(static_cast<std::uint8_t>(len));
    } else {
        out.push_back(0x82);
        out.push_back(static_cast<std::uint8_t>(len >> 8));
        out.push_back(static_cast<std::uint8_t>(len & 0xff));
    }
    out.insert(out.end(), content.begin(), content.end());
    return out;
}

std::vector<std::uint8_t> der_certificate(const bytes& serial_content) {
    bytes version_int = der_tlv(0x02, {0x02});       // INTEGER 2 (v3)
    bytes version = der_tlv(0xa0, version_int);      // [0] EXPLICIT
    bytes serial = der_tlv(0x02, serial_content);

    // enough TBS structure for a serial walk: sig alg, issuer, validity,
    // subject, key — content is irrelevant downstream
    bytes alg_oid = der_tlv(0x06, {0x2a, 0x86, 0x48, 0x86, 0xf7, 0x0d, 0x01,
                                   0x01, 0x0b});
    bytes sig_alg;
    {
        bytes body = alg_oid;
        bytes null_param = der_tlv(0x05, {});
        body.insert(body.end(), null_param.begin(), null_param.end());
        sig_alg = der_tlv(0x30, body);
    }
    bytes issuer = der_tlv(0x30, {});
    bytes validity;
    {
        bytes utc1 = der_tlv(0x17, {'2', '6', '0', '1', '0', '1', '0', '0',
                                    '0', '0', '0', '0', 'Z'});
        bytes utc2 = der_tlv(0x17, {'3', '6', '0', '1', '0', '1', '0', '0',
                                    '0', '0', '0', '0', 'Z'});
        bytes body = utc1;
        body.insert(body.end(), utc2.begin(), utc2.end());
        validity = der_tlv(0x30, body);
    }
    bytes subject = der_tlv(0x30, {});
    bytes spki;
    {
        bytes body = sig_alg;
        bytes key = der_tlv(0x03, {0x00, 0x05});
        body.insert(body.end(), key.begin(), key.end());
        spki = der_tlv(0x30, body);
    }

    bytes tbs_body;
    for (const bytes* part :
         {&version, &serial, &sig_alg, &issuer, &validity, &subject, &spki}) {
        tbs_body.insert(tbs_body.end(), part->begin(), part->end());
    }
    bytes tbs = der_tlv(0x30, tbs_body);

    bytes cert_body = tbs;
    cert_body.insert(cert_body.end(), sig_alg.begin(), sig_alg.end());
    bytes signature = der_tlv(0x03, {0x00, 0xaa, 0xbb});
    cert_body.insert(cert_body.end(), signature.begin(), signature.end());
    return der_tlv(0x30, cert_body);
}

std::vector<std::uint8_t> pkcs7_signed_data(
    const std::vector<bytes>& certificates) {
    bytes version = der_tlv(0x02, {0x01});
    bytes digest_algs = der_tlv(0x31, {});  // SET, empty
    bytes content_oid = der_tlv(0x06, {0x2a, 0x86, 0x48, 0x86, 0xf7, 0x0d,
                                       0x01, 0x07, 0x01});  // pkcs7-data
    bytes inner_content = der_tlv(0x30, content_oid);

    bytes cert_set_body;
    for (const auto& c : certificates) {
        cert_set_body.insert(cert_set_body.end(), c.begin(), c.end());
    }
    bytes certs = der_tlv(0xa0, cert_set_body);  // [0] IMPLICIT
    bytes signer_infos = der_tlv(0x31, {});

    bytes sd_body;
    for (const bytes* part :
         {&version, &digest_algs, &inner_content, &certs, &signer_infos}) {
        sd_body.insert(sd_body.end(), part->begin(), part->end());
    }
    bytes signed_data = der_tlv(0x30, sd_body);

    bytes sd_oid = der_tlv(0x06, {0x2a, 0x86, 0x48, 0x86, 0xf7, 0x0d, 0x01,
                                  0x07, 0x02});  // pkcs7-signedData
    bytes wrapper = der_tlv(0xa0, signed_data);
    bytes ci_body = sd_oid;
    ci_body.insert(ci_body.end(), wrapper.begin(), wrapper.end());
    return der_tlv(0x30, ci_body);
}

// ---- DEX ------------------------------------------------------------

namespace {

void put_uleb128(bytes& out, std::uint32_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(v & 0x7f) | 0x80);
        v >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(v));
}

/// UTF-8 input to MUTF-8 plus the UTF-16 unit count.
std::pair<bytes, std::uint32_t> to_mutf8(const std::string& utf8) {
    bytes out;
    std::uint32_t units = 0;
    std::size_t i = 0;
    auto emit_unit = [&out, &units](std::uint32_t u) {
        ++units;
        if (u == 0) {
            out.push_back(0xc0);
            out.push_back(0x80);
        } else if (u < 0x80) {
            out.push_back(static_cast<std::uint8_t>(u));
        } else if (u < 0x800) {
            out.push_back(static_cast<std::uint8_t>(0xc0 | u >> 6));
            out.push_back(static_cast<std::uint8_t>(0x80 | (u & 0x3f)));
        } else {
            out.push_back(static_cast<std::uint8_t>(0xe0 | u >> 12));
            out.push_back(static_cast<std::uint8_t>(0x80 | (u >> 6 & 0x3f)));
            out.push_back(static_cast<std::uint8_t>(0x80 | (u & 0x3f)));
        }
    };
    while (i < utf8.size()) {
        std::uint8_t b = static_cast<std::uint8_t>(utf8[i]);
        std::uint32_t cp;
        if (b < 0x80) {
            cp = b;
            i += 1;
        } else if ((b & 0xe0) == 0xc0) {
            cp = (b & 0x1f) << 6 | (utf8[i + 1] & 0x3f);
            i += 2;
        } else if ((b & 0xf0) == 0xe0) {
            cp = (b & 0x0f) << 12 | (utf8[i + 1] & 0x3f) << 6 |
                 (utf8[i + 2] & 0x3f);
            i += 3;
        } else {
            cp = (b & 0x07) << 18 | (utf8[i + 1] & 0x3f) << 12 |
                 (utf8[i + 2] & 0x3f) << 6 | (utf8[i + 3] & 0x3f);
            i += 4;
        }
        if (cp >= 0x10000) {  // surrogate pair, CESU-8 style
            emit_unit(0xd800 + ((cp - 0x10000) >> 10));
            emit_unit(0xdc00 + ((cp - 0x10000) & 0x3ff));
        } else {
            emit_unit(cp);
        }
    }
    return {out, units};
}

} // namespace

std::vector<std::uint8_t> dex_file(const std::vector<std::string>& pool) {
    const std::uint32_t header_size = 0x70;
    bytes out(header_size, 0);
    const char magic[8] = {'d', 'e', 'x', '\n', '0', '3', '5', '\0'};
    std::copy(magic, magic + 8, out.begin());
    patch_u32(out, 36, header_size);
    patch_u32(out, 40, 0x12345678);  // endian tag
    patch_u32(out, 56, static_cast<std::uint32_t>(pool.size()));
    patch_u32(out, 60, pool.empty() ? 0 : header_size);

    // string_ids table, backpatched once data offsets are known
    std::size_t ids_at = out.size();
    out.resize(out.size() + 4 * pool.size(), 0);

    for (std::size_t i = 0; i < pool.size(); ++i) {
        patch_u32(out, ids_at + 4 * i, static_cast<std::uint32_t>(out.size()));
        auto [mutf8, units] = to_mutf8(pool[i]);
        put_uleb128(out, units);
        out.insert(out.end(), mutf8.begin(), mutf8.end());
        out.push_back(0x00);
    }
    patch_u32(out, 32, static_cast<std::uint32_t>(out.size()));  // file size
    return out;
}

// ---- AXML -----------------------------------------------------------

namespace {

class axml_builder {
public:
    std::uint32_t intern(const std::string& s) {
        auto it = index_.find(s);
        if (it != index_.end()) return it->second;
        std::uint32_t idx = static_cast<std::uint32_t>(strings_.size());
        strings_.push_back(s);
        index_.emplace(s, idx);
        return idx;
    }

    bytes build_pool() const {
        bytes data;
        std::vector<std::uint32_t> offsets;
        for (const auto& s : strings_) {
            offsets.push_back(static_cast<std::uint32_t>(data.size()));
            put_u16(data, static_cast<std::uint16_t>(s.size()));
            for (char c : s) put_u16(data, static_cast<std::uint8_t>(c));
            put_u16(data, 0);
        }
        while (data.size() % 4 != 0) data.push_back(0);

        bytes chunk;
        put_u16(chunk, 0x0001);  // string pool
        put_u16(chunk, 28);
        std::uint32_t size = static_cast<std::uint32_t>(
            28 + 4 * strings_.size() + data.size());
        put_u32(chunk, size);
        put_u32(chunk, static_cast<std::uint32_t>(strings_.size()));
        put_u32(chunk, 0);  // style count
        put_u32(chunk, 0);  // flags: UTF-16
        put_u32(chunk,
                static_cast<std::uint32_t>(28 + 4 * strings_.size()));
        put_u32(chunk, 0);  // styles start
        for (auto off : offsets) put_u32(chunk, off);
        chunk.insert(chunk.end(), data.begin(), data.end());
        return chunk;
    }

private:
    std::vector<std::string> strings_;
    std::map<std::string, std::uint32_t> index_;
};

constexpr std::uint32_t kNoRef = 0xffffffff;

struct axml_attr {
    std::uint32_t ns;
    std::uint32_t name;
    std::uint32_t raw;
    std::uint8_t type;
    std::uint32_t data;
};

bytes start_element(std::uint32_t name, const std::vector<axml_attr>& attrs) {
    bytes chunk;
    put_u16(chunk, 0x0102);
    put_u16(chunk, 16);
    put_u32(chunk, static_cast<std::uint32_t>(16 + 20 + 20 * attrs.size()));
    put_u32(chunk, 1);       // line
    put_u32(chunk, kNoRef);  // comment
    put_u32(chunk, kNoRef);  // element namespace
    put_u32(chunk, name);
    put_u16(chunk, 20);  // attribute start
    put_u16(chunk, 20);  // attribute size
    put_u16(chunk, static_cast<std::uint16_t>(attrs.size()));
    put_u16(chunk, 0);  // id index
    put_u16(chunk, 0);  // class index
    put_u16(chunk, 0);  // style index
    for (const auto& a : attrs) {
        put_u32(chunk, a.ns);
        put_u32(chunk, a.name);
        put_u32(chunk, a.raw);
        put_u16(chunk, 8);  // typed value size
        chunk.push_back(0);
        chunk.push_back(a.type);
        put_u32(chunk, a.data);
    }
    return chunk;
}

bytes end_element(std::uint32_t name) {
    bytes chunk;
    put_u16(chunk, 0x0103);
    put_u16(chunk, 16);
    put_u32(chunk, 24);
    put_u32(chunk, 1);
    put_u32(chunk, kNoRef);
    put_u32(chunk, kNoRef);
    put_u32(chunk, name);
    return chunk;
}

} // namespace

std::vector<std::uint8_t> axml_manifest(const axml_doc& doc) {
    axml_builder pool;
    // resource-mapped attribute names come first, mirroring aapt output
    std::uint32_t s_name = pool.intern("name");
    std::uint32_t s_priority = pool.intern("priority");
    std::uint32_t s_label = pool.intern("label");
    std::uint32_t s_android_ns =
        pool.intern("http://schemas.android.com/apk/res/android");
    std::uint32_t s_android = pool.intern("android");
    std::uint32_t s_manifest = pool.intern("manifest");
    std::uint32_t s_package = pool.intern("package");
    std::uint32_t s_uses_perm = pool.intern("uses-permission");
    std::uint32_t s_application = pool.intern("application");
    std::uint32_t s_filter = pool.intern("intent-filter");
    std::uint32_t s_action = pool.intern("action");

    bytes body;

    // start namespace
    {
        bytes chunk;
        put_u16(chunk, 0x0100);
        put_u16(chunk, 16);
        put_u32(chunk, 24);
        put_u32(chunk, 1);
        put_u32(chunk, kNoRef);
        put_u32(chunk, s_android);
        put_u32(chunk, s_android_ns);
        body.insert(body.end(), chunk.begin(), chunk.end());
    }

    auto append = [&body](const bytes& chunk) {
        body.insert(body.end(), chunk.begin(), chunk.end());
    };

    std::uint32_t v_package = pool.intern(doc.package);
    append(start_element(
        s_manifest,
        {{kNoRef, s_package, v_package, 0x03, v_package}}));

    for (const auto& perm : doc.permissions) {
        std::uint32_t v = pool.intern(perm);
        append(start_element(s_uses_perm,
                             {{s_android_ns, s_name, v, 0x03, v}}));
        append(end_element(s_uses_perm));
    }

    std::vector<axml_attr> app_attrs;
    if (!doc.label.empty()) {
        std::uint32_t v = pool.intern(doc.label);
        app_attrs.push_back({s_android_ns, s_label, v, 0x03, v});
    }
    append(start_element(s_application, app_attrs));

    for (const auto& comp : doc.components) {
        std::uint32_t s_kind = pool.intern(comp.kind);
        std::uint32_t v_name = pool.intern(comp.name);
        append(start_element(s_kind,
                             {{s_android_ns, s_name, v_name, 0x03, v_name}}));
        for (const auto& filter : comp.filters) {
            std::vector<axml_attr> fattrs;
            if (filter.priority) {
                fattrs.push_back({s_android_ns, s_priority, kNoRef, 0x10,
                                  static_cast<std::uint32_t>(*filter.priority)});
            }
            append(start_element(s_filter, fattrs));
            std::uint32_t v_action = pool.intern(filter.action);
            append(start_element(
                s_action, {{s_android_ns, s_name, v_action, 0x03, v_action}}));
            append(end_element(s_action));
            append(end_element(s_filter));
        }
        append(end_element(s_kind));
    }

    append(end_element(s_application));
    append(end_element(s_manifest));

    // end namespace
    {
        bytes chunk;
        put_u16(chunk, 0x0101);
        put_u16(chunk, 16);
        put_u32(chunk, 24);
        put_u32(chunk, 1);
        put_u32(chunk, kNoRef);
        put_u32(chunk, s_android);
        put_u32(chunk, s_android_ns);
        body.insert(body.end(), chunk.begin(), chunk.end());
    }

    bytes pool_chunk = pool.build_pool();

    // resource map covering the three mapped attribute names
    bytes resmap;
    put_u16(resmap, 0x0180);
    put_u16(resmap, 8);
    put_u32(resmap, 8 + 4 * 3);
    put_u32(resmap, 0x01010003);  // name
    put_u32(resmap, 0x0101001c);  // priority
    put_u32(resmap, 0x01010001);  // label

    bytes out;
    put_u16(out, 0x0003);
    put_u16(out, 8);
    put_u32(out, static_cast<std::uint32_t>(8 + pool_chunk.size() +
                                            resmap.size() + body.size()));
    out.insert(out.end(), pool_chunk.begin(), pool_chunk.end());
    out.insert(out.end(), resmap.begin(), resmap.end());
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

// ---- ZIP / APK -------------------------------------------------------

namespace {

bytes deflate_raw(const bytes& in) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8,
                     Z_DEFAULT_STRATEGY) != Z_OK) {
        throw std::runtime_error("deflateInit2 failed");
    }
    bytes out(deflateBound(&zs, static_cast<uLong>(in.size())));
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    if (deflate(&zs, Z_FINISH) != Z_STREAM_END) {
        deflateEnd(&zs);
        throw std::runtime_error("deflate failed");
    }
    out.resize(zs.total_out);
    deflateEnd(&zs);
    return out;
}

} // namespace

std::vector<std::uint8_t> zip_archive(
    const std::vector<zip_entry_spec>& entries) {
    bytes out;
    struct central_record {
        std::string name;
        std::uint16_t method;
        std::uint32_t crc;
        std::uint32_t csize;
        std::uint32_t usize;
        std::uint32_t offset;
    };
    std::vector<central_record> central;

    for (const auto& e : entries) {
        std::uint32_t crc = static_cast<std::uint32_t>(
            crc32(0, e.data.data(), static_cast<uInt>(e.data.size())));
        bytes payload = e.deflate ? deflate_raw(e.data) : e.data;
        std::uint16_t method = e.deflate ? 8 : 0;
        central.push_back({e.name, method, crc,
                           static_cast<std::uint32_t>(payload.size()),
                           static_cast<std::uint32_t>(e.data.size()),
                           static_cast<std::uint32_t>(out.size())});
        put_u32(out, 0x04034b50);
        put_u16(out, 20);      // version needed
        put_u16(out, 0);       // flags
        put_u16(out, method);
        put_u16(out, 0);       // time
        put_u16(out, 0);       // date
        put_u32(out, crc);
        put_u32(out, static_cast<std::uint32_t>(payload.size()));
        put_u32(out, static_cast<std::uint32_t>(e.data.size()));
        put_u16(out, static_cast<std::uint16_t>(e.name.size()));
        put_u16(out, 0);       // extra length
        out.insert(out.end(), e.name.begin(), e.name.end());
        out.insert(out.end(), payload.begin(), payload.end());
    }

    std::uint32_t cd_offset = static_cast<std::uint32_t>(out.size());
    for (const auto& c : central) {
        put_u32(out, 0x02014b50);
        put_u16(out, 20);  // version made by
        put_u16(out, 20);  // version needed
        put_u16(out, 0);
        put_u16(out, c.method);
        put_u16(out, 0);
        put_u16(out, 0);
        put_u32(out, c.crc);
        put_u32(out, c.csize);
        put_u32(out, c.usize);
        put_u16(out, static_cast<std::uint16_t>(c.name.size()));
        put_u16(out, 0);  // extra
        put_u16(out, 0);  // comment
        put_u16(out, 0);  // disk
        put_u16(out, 0);  // internal attrs
        put_u32(out, 0);  // external attrs
        put_u32(out, c.offset);
        out.insert(out.end(), c.name.begin(), c.name.end());
    }
    std::uint32_t cd_size = static_cast<std::uint32_t>(out.size()) - cd_offset;

    put_u32(out, 0x06054b50);
    put_u16(out, 0);
    put_u16(out, 0);
    put_u16(out, static_cast<std::uint16_t>(central.size()));
    put_u16(out, static_cast<std::uint16_t>(central.size()));
    put_u32(out, cd_size);
    put_u32(out, cd_offset);
    put_u16(out, 0);  // comment length
    return out;
}

std::vector<std::uint8_t> apk(const apk_spec& spec) {
    std::vector<zip_entry_spec> entries;

    entries.push_back({"AndroidManifest.xml", axml_manifest(spec.manifest),
                       spec.deflate_manifest});

    std::vector<bytes> certs;
    for (const auto& serial : spec.cert_serial_contents) {
        certs.push_back(der_certificate(serial));
    }
    if (!certs.empty()) {
        bytes mf(
            {'M', 'a', 'n', 'i', 'f', 'e', 's', 't', '-', 'V', 'e', 'r', 's',
             'i', 'o', 'n', ':', ' ', '1', '.', '0', '\n'});
        entries.push_back({"META-INF/MANIFEST.MF", mf, true});
        entries.push_back({"META-INF/CERT.RSA", pkcs7_signed_data(certs),
                           false});
    }

    for (std::size_t i = 0; i < spec.dex_pools.size(); ++i) {
        std::string name =
            i == 0 ? "classes.dex" : "classes" + std::to_string(i + 1) + ".dex";
        entries.push_back({name, dex_file(spec.dex_pools[i]), i % 2 == 1});
    }
    return zip_archive(entries);
}

// ---- brute-force oracles ----------------------------------------------

std::size_t lcs_recursive(const std::u32string& a, const std::u32string& b) {
    if (a.empty() || b.empty()) return 0;
    if (a.back() == b.back()) {
        return 1 + lcs_recursive(a.substr(0, a.size() - 1),
                                 b.substr(0, b.size() - 1));
    }
    return std::max(lcs_recursive(a.substr(0, a.size() - 1), b),
                    lcs_recursive(a, b.substr(0, b.size() - 1)));
}

std::size_t levenshtein_recursive(const std::u32string& a,
                                  const std::u32string& b) {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();
    std::size_t cost = a.back() == b.back() ? 0 : 1;
    std::u32string a1 = a.substr(0, a.size() - 1);
    std::u32string b1 = b.substr(0, b.size() - 1);
    return std::min({levenshtein_recursive(a1, b) + 1,
                     levenshtein_recursive(a, b1) + 1,
                     levenshtein_recursive(a1, b1) + cost});
}

bool token_scan(const std::string& haystack, const std::string& token) {
    if (token.empty()) return false;
    auto ident = [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
               (c >= '0' && c <= '9') || c == '_' || c == '$';
    };
    for (std::size_t at = 0; at + token.size() <= haystack.size(); ++at) {
        if (haystack.compare(at, token.size(), token) != 0) continue;
        if (at > 0 && ident(haystack[at - 1])) continue;
        std::size_t end = at + token.size();
        if (end < haystack.size() && ident(haystack[end])) continue;
        return true;
    }
    return false;
}

} // namespace fixtures
