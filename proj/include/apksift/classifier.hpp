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

#ifndef APKSIFT_CLASSIFIER_HPP
#define APKSIFT_CLASSIFIER_HPP

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "apksift/features.hpp"

namespace apksift {

/// The (API string, command set, permission strings) triple that represents
/// a sample, and — frozen to the founding sample — a group.
struct group_signature {
    std::u32string api_string;
    std::set<std::string> commands;
    std::u32string requested_perm_string;    // sorted, duplicate-free
    std::u32string api_related_perm_string;  // sorted, duplicate-free
    std::string source_sha256;

    bool operator==(const group_signature&) const = default;
};

group_signature make_signature(const app_profile& profile,
                               const feature_config& cfg);

/// Global-alignment similarity with match 1, mismatch 0, gap 0; that
/// scoring makes the optimal alignment score the LCS length, normalized by
/// the longer sequence. Both empty -> 1.
double sim_api(const std::u32string& s1, const std::u32string& s2);

/// Jaccard coefficient; both empty -> 1.
double sim_cmd(const std::set<std::string>& c1, const std::set<std::string>& c2);

/// Per channel 1 − edit distance / max length (both empty -> 1), averaged
/// over the requested and API-related permission strings.
double sim_perm(const group_signature& a, const group_signature& b);

/// Levenshtein distance over symbol sequences.
std::size_t edit_distance(const std::u32string& s1, const std::u32string& s2);

struct similarity_weights {
    double api = 1.0 / 3.0;
    double cmd = 1.0 / 3.0;
    double perm = 1.0 / 3.0;

    void validate() const;  // throws errc::bad_weights
};

/// SS = w_api·S_api + w_cmd·S_cmd + w_perm·S_perm.
double similarity_score(const group_signature& a, const group_signature& b,
                        const similarity_weights& w);

struct malware_group {
    int id = 0;
    group_signature signature;
    std::vector<std::string> members;  // sha256, join order
};

struct group_set {
    std::vector<malware_group> groups;  // creation order
    double t_s = 0.7;
    similarity_weights weights;
};

/// Streaming threshold grouping: each sample joins the arg-max group when
/// max(SS) >= T_S (ties to the lowest group id), otherwise founds a new
/// group carrying the sample's own signature. Strictly order-dependent by
/// construction; deterministic for a fixed input order.
group_set classify_stream(std::span<const app_profile> samples,
                          const feature_config& cfg, double t_s,
                          const similarity_weights& w);

struct family_accuracy {
    std::uint64_t samples = 0;
    std::uint64_t correct = 0;
    double accuracy = 0.0;
};

struct accuracy_report {
    std::map<int, std::string> predicted_family;  // group id -> majority label
    std::map<std::string, family_accuracy> per_family;
    double overall = 0.0;
    std::uint64_t total_samples = 0;
    std::uint64_t total_correct = 0;
};

/// Majority-label accuracy per the grouped samples: a sample counts correct
/// iff its group's majority family equals its own label (majority ties go
/// to the earliest-joined member's label). Throws errc::missing_label.
accuracy_report group_accuracy(
    const group_set& gs, const std::map<std::string, std::string>& labels);

std::string group_set_to_json(const group_set& gs);
group_set group_set_from_json(const std::string& text);

} // namespace apksift

#endif
