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

#ifndef APKSIFT_BLACKLIST_HPP
#define APKSIFT_BLACKLIST_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>

#include "apksift/features.hpp"
#include "apksift/serial.hpp"

namespace apksift {

struct serial_provenance {
    std::set<std::string> families;
    std::uint64_t sample_count = 0;
};

/// Certificate serials convicted by the multi-family rule. Matching is on
/// serial bytes alone (issuer is deliberately ignored, mirroring the idea
/// that the serial is the creator fingerprint).
struct serial_blacklist {
    std::set<serial_number> entries;
    /// every serial observed at build time, for audit and reporting
    std::map<serial_number, serial_provenance> provenance;
    std::set<serial_number> excluded_test_keys;
    std::chrono::system_clock::time_point built_at;
};

/// Includes a serial iff it was observed under >= 2 distinct family labels,
/// then removes the configured test keys (a test key identifies a build
/// environment, not a creator). A profile carrying k serials contributes to
/// all k groups. Throws errc::unlabeled_sample unless every profile carries
/// a malicious family label.
serial_blacklist build_blacklist(std::span<const app_profile> profiles,
                                 const feature_config& cfg);

/// True iff any of the given serials is an entry (byte comparison).
bool blacklist_contains(const serial_blacklist& bl,
                        std::span<const serial_number> serials);

/// Distinct-family count per serial, inverted into a histogram
/// {family count -> number of serials}; serials in `test_keys` are left
/// out of the tally.
std::map<std::size_t, std::size_t> family_histogram(
    std::span<const app_profile> profiles,
    const std::set<serial_number>& test_keys);

struct serial_stats_result {
    double mean_apps_per_serial = 0.0;
    /// apps-signed count -> number of serials with that count
    std::map<std::uint64_t, std::uint64_t> frequency_table;
};

/// mean = |profiles| / |distinct serials|. Throws errc::empty_corpus.
serial_stats_result serial_stats(std::span<const app_profile> profiles);

/// Text format: one colon-hex serial per line; "#" comments carry the
/// format version and per-serial provenance; blank lines and duplicates
/// are tolerated on load.
std::string blacklist_to_text(const serial_blacklist& bl);
serial_blacklist blacklist_from_text(const std::string& text);

} // namespace apksift

#endif
