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

#include "apksift/serial.hpp"
#include "apksift/error.hpp"

namespace apksift {

serial_number::serial_number(std::span<const std::uint8_t> content) {
    std::size_t start = 0;
    while (start + 1 < content.size() && content[start] == 0x00) {
        ++start;
    }
    if (content.empty()) {
        bytes_.assign(1, 0x00);
    } else {
        bytes_.assign(content.begin() + static_cast<std::ptrdiff_t>(start),
                      content.end());
    }
    // minimal magnitude: a single remaining 0x00 means the zero serial
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

serial_number serial_number::from_display(const std::string& text) {
    std::vector<std::uint8_t> out;
    int hi = -1;
    for (char c : text) {
        if (c == ':') continue;
        int v = hex_value(c);
        if (v < 0) {
            throw error(errc::schema_violation,
                        "serial '" + text + "': invalid character");
        }
        if (hi < 0) {
            hi = v;
        } else {
            out.push_back(static_cast<std::uint8_t>(hi << 4 | v));
            hi = -1;
        }
    }
    if (hi >= 0 || out.empty()) {
        throw error(errc::schema_violation,
                    "serial '" + text + "': odd or empty hex string");
    }
    return serial_number(out);
}

std::string serial_number::display() const {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes_.size() * 3);
    for (std::size_t i = 0; i < bytes_.size(); ++i) {
        if (i != 0) out.push_back(':');
        out.push_back(digits[bytes_[i] >> 4]);
        out.push_back(digits[bytes_[i] & 0x0f]);
    }
    return out;
}

std::string_view errc_name(errc code) {
    switch (code) {
    case errc::not_an_archive: return "NotAnArchive";
    case errc::no_certificate: return "NoCertificate";
    case errc::manifest_missing: return "ManifestMissing";
    case errc::manifest_malformed: return "ManifestMalformed";
    case errc::dex_malformed: return "DexMalformed";
    case errc::schema_violation: return "SchemaViolation";
    case errc::config_invalid: return "ConfigInvalid";
    case errc::empty_category: return "EmptyCategory";
    case errc::config_mismatch: return "ConfigMismatch";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::unlabeled_sample: return "UnlabeledSample";
    case errc::empty_corpus: return "EmptyCorpus";
    case errc::bad_weights: return "BadWeights";
    case errc::missing_label: return "MissingLabel";
    case errc::corpus_too_small: return "CorpusTooSmall";
    case errc::fold_degenerate: return "FoldDegenerate";
    case errc::bad_spec: return "BadSpec";
    case errc::missing_artifact: return "MissingArtifact";
    case errc::version_mismatch: return "VersionMismatch";
    case errc::workspace_locked: return "WorkspaceLocked";
    case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

} // namespace apksift
