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

#include "apksift/blacklist.hpp"

#include <sstream>

#include "apksift/error.hpp"

namespace apksift {

serial_blacklist build_blacklist(std::span<const app_profile> profiles,
                                 const feature_config& cfg) {
    serial_blacklist bl;
    bl.built_at = std::chrono::system_clock::now();

    for (const auto& p : profiles) {
        if (!p.label || !p.label->malicious || p.label->family.empty()) {
            throw error(errc::unlabeled_sample,
                        "profile " + p.sha256 +
                            " lacks a malicious family label");
        }
        for (const auto& s : p.serials) {
            auto& prov = bl.provenance[s];
            prov.families.insert(p.label->family);
            ++prov.sample_count;
        }
    }

    for (const auto& [serial, prov] : bl.provenance) {
        if (prov.families.size() < 2) continue;
        if (cfg.test_key_serials.count(serial) != 0) {
            bl.excluded_test_keys.insert(serial);
            continue;
        }
        bl.entries.insert(serial);
    }
    return bl;
}

bool blacklist_contains(const serial_blacklist& bl,
                        std::span<const serial_number> serials) {
    for (const auto& s : serials) {
        if (bl.entries.count(s) != 0) return true;
    }
    return false;
}

std::map<std::size_t, std::size_t> family_histogram(
    std::span<const app_profile> profiles,
    const std::set<serial_number>& test_keys) {
    std::map<serial_number, std::set<std::string>> families_by_serial;
    for (const auto& p : profiles) {
        if (!p.label || !p.label->malicious) continue;
        for (const auto& s : p.serials) {
            families_by_serial[s].insert(p.label->family);
        }
    }
    std::map<std::size_t, std::size_t> histogram;
    for (const auto& [serial, families] : families_by_serial) {
        if (test_keys.count(serial) != 0) continue;
        ++histogram[families.size()];
    }
    return histogram;
}

serial_stats_result serial_stats(std::span<const app_profile> profiles) {
    if (profiles.empty()) {
        throw error(errc::empty_corpus, "no profiles to summarize");
    }
    std::map<serial_number, std::uint64_t> apps_per_serial;
    for (const auto& p : profiles) {
        for (const auto& s : p.serials) {
            ++apps_per_serial[s];
        }
    }
    serial_stats_result result;
    if (!apps_per_serial.empty()) {
        result.mean_apps_per_serial =
            static_cast<double>(profiles.size()) /
            static_cast<double>(apps_per_serial.size());
    }
    for (const auto& [serial, count] : apps_per_serial) {
        ++result.frequency_table[count];
    }
    return result;
}

std::string blacklist_to_text(const serial_blacklist& bl) {
    std::ostringstream out;
    out << "# serial blacklist\n";
    out << "# format_version: 1\n";
    for (const auto& entry : bl.entries) {
        auto prov = bl.provenance.find(entry);
        if (prov != bl.provenance.end()) {
            out << "# " << entry.display() << " families=";
            bool first = true;
            for (const auto& f : prov->second.families) {
                if (!first) out << ",";
                out << f;
                first = false;
            }
            out << " samples=" << prov->second.sample_count << "\n";
        }
        out << entry.display() << "\n";
    }
    return out.str();
}

serial_blacklist blacklist_from_text(const std::string& text) {
    serial_blacklist bl;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.pop_back();
        }
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto at = line.find("format_version:");
            if (at != std::string::npos) {
                int version = std::atoi(line.c_str() + at + 15);
                if (version != 1) {
                    throw error(errc::version_mismatch,
                                "blacklist file format_version " +
                                    std::to_string(version));
                }
            }
            continue;
        }
        bl.entries.insert(serial_number::from_display(line));
    }
    return bl;
}

} // namespace apksift
