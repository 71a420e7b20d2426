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

#include "apksift/classifier.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "apksift/error.hpp"
#include "apksift/unicode.hpp"

namespace apksift {

using nlohmann::json;

group_signature make_signature(const app_profile& profile,
                               const feature_config& cfg) {
    group_signature sig;
    sig.api_string = profile.api_string;
    sig.commands = profile.commands;
    sig.source_sha256 = profile.sha256;
    auto perm_string = [&cfg](std::span<const std::uint8_t> vec) {
        std::u32string s;
        for (std::size_t j = 0; j < vec.size(); ++j) {
            if (vec[j]) s.push_back(cfg.permission_symbols[j]);
        }
        std::sort(s.begin(), s.end());
        return s;
    };
    sig.requested_perm_string = perm_string(profile.requested_critical);
    sig.api_related_perm_string = perm_string(profile.api_related_critical);
    return sig;
}

double sim_api(const std::u32string& s1, const std::u32string& s2) {
    if (s1.empty() && s2.empty()) return 1.0;
    if (s1.empty() || s2.empty()) return 0.0;

    // Needleman-Wunsch with match 1, mismatch 0, gap 0; the optimal global
    // alignment score under this scoring is the LCS length
    constexpr int kMatch = 1;
    constexpr int kMismatch = 0;
    constexpr int kGap = 0;

    const std::size_t n = s1.size();
    const std::size_t m = s2.size();
    std::vector<int> prev(m + 1), curr(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        prev[j] = static_cast<int>(j) * kGap;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        curr[0] = static_cast<int>(i) * kGap;
        for (std::size_t j = 1; j <= m; ++j) {
            int diag = prev[j - 1] + (s1[i - 1] == s2[j - 1] ? kMatch : kMismatch);
            curr[j] = std::max({diag, prev[j] + kGap, curr[j - 1] + kGap});
        }
        std::swap(prev, curr);
    }
    return static_cast<double>(prev[m]) / static_cast<double>(std::max(n, m));
}

double sim_cmd(const std::set<std::string>& c1,
               const std::set<std::string>& c2) {
    if (c1.empty() && c2.empty()) return 1.0;
    std::size_t intersection = 0;
    for (const auto& c : c1) {
        if (c2.count(c) != 0) ++intersection;
    }
    std::size_t unions = c1.size() + c2.size() - intersection;
    return static_cast<double>(intersection) / static_cast<double>(unions);
}

std::size_t edit_distance(const std::u32string& s1, const std::u32string& s2) {
    const std::size_t n = s1.size();
    const std::size_t m = s2.size();
    std::vector<std::size_t> prev(m + 1), curr(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        curr[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (s1[i - 1] == s2[j - 1] ? 0 : 1);
            curr[j] = std::min({sub, prev[j] + 1, curr[j - 1] + 1});
        }
        std::swap(prev, curr);
    }
    return prev[m];
}

namespace {

double channel_similarity(const std::u32string& a, const std::u32string& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t max_len = std::max(a.size(), b.size());
    return 1.0 - static_cast<double>(edit_distance(a, b)) /
                     static_cast<double>(max_len);
}

} // namespace

double sim_perm(const group_signature& a, const group_signature& b) {
    double requested =
        channel_similarity(a.requested_perm_string, b.requested_perm_string);
    double api_related = channel_similarity(a.api_related_perm_string,
                                            b.api_related_perm_string);
    return (requested + api_related) / 2.0;
}

void similarity_weights::validate() const {
    if (api < 0.0 || cmd < 0.0 || perm < 0.0 ||
        std::abs(api + cmd + perm - 1.0) > 1e-9) {
        throw error(errc::bad_weights,
                    "weights must be non-negative and sum to 1");
    }
}

double similarity_score(const group_signature& a, const group_signature& b,
                        const similarity_weights& w) {
    w.validate();
    return w.api * sim_api(a.api_string, b.api_string) +
           w.cmd * sim_cmd(a.commands, b.commands) +
           w.perm * sim_perm(a, b);
}

group_set classify_stream(std::span<const app_profile> samples,
                          const feature_config& cfg, double t_s,
                          const similarity_weights& w) {
    w.validate();
    group_set gs;
    gs.t_s = t_s;
    gs.weights = w;

    for (const auto& sample : samples) {
        group_signature sig = make_signature(sample, cfg);

        // groups are iterated in creation order, so with strict > the
        // first maximum wins: ties resolve to the lowest group id
        int best_index = -1;
        double best_score = -1.0;
        for (std::size_t g = 0; g < gs.groups.size(); ++g) {
            double ss = similarity_score(sig, gs.groups[g].signature, w);
            if (ss > best_score) {
                best_score = ss;
                best_index = static_cast<int>(g);
            }
        }

        if (best_index >= 0 && best_score >= t_s) {
            gs.groups[static_cast<std::size_t>(best_index)].members.push_back(
                sample.sha256);
        } else {
            malware_group fresh;
            fresh.id = static_cast<int>(gs.groups.size()) + 1;
            fresh.signature = std::move(sig);
            fresh.members.push_back(sample.sha256);
            gs.groups.push_back(std::move(fresh));
        }
    }
    return gs;
}

accuracy_report group_accuracy(
    const group_set& gs, const std::map<std::string, std::string>& labels) {
    accuracy_report report;

    auto label_of = [&labels](const std::string& sha) -> const std::string& {
        auto it = labels.find(sha);
        if (it == labels.end()) {
            throw error(errc::missing_label, "sample " + sha);
        }
        return it->second;
    };

    for (const auto& group : gs.groups) {
        std::map<std::string, std::uint64_t> tally;
        for (const auto& sha : group.members) {
            ++tally[label_of(sha)];
        }
        std::uint64_t top = 0;
        for (const auto& [family, count] : tally) top = std::max(top, count);
        // tie on the majority count: the earliest-joined member whose
        // label reaches the top count decides
        std::string majority;
        for (const auto& sha : group.members) {
            if (tally[label_of(sha)] == top) {
                majority = label_of(sha);
                break;
            }
        }
        report.predicted_family[group.id] = majority;

        for (const auto& sha : group.members) {
            const std::string& truth = label_of(sha);
            auto& fam = report.per_family[truth];
            ++fam.samples;
            if (truth == majority) ++fam.correct;
        }
    }

    for (auto& [family, fam] : report.per_family) {
        fam.accuracy = fam.samples == 0
                           ? 0.0
                           : static_cast<double>(fam.correct) /
                                 static_cast<double>(fam.samples);
        report.total_samples += fam.samples;
        report.total_correct += fam.correct;
    }
    report.overall = report.total_samples == 0
                         ? 0.0
                         : static_cast<double>(report.total_correct) /
                               static_cast<double>(report.total_samples);
    return report;
}

namespace {

json signature_to_json(const group_signature& sig) {
    return json{{"api_string", utf8_encode(sig.api_string)},
                {"commands", sig.commands},
                {"requested_perm_string", utf8_encode(sig.requested_perm_string)},
                {"api_related_perm_string",
                 utf8_encode(sig.api_related_perm_string)},
                {"source_sha256", sig.source_sha256}};
}

group_signature signature_from_json(const json& j) {
    group_signature sig;
    sig.api_string = utf8_decode(j.at("api_string").get<std::string>());
    for (const auto& c : j.at("commands")) {
        sig.commands.insert(c.get<std::string>());
    }
    sig.requested_perm_string =
        utf8_decode(j.at("requested_perm_string").get<std::string>());
    sig.api_related_perm_string =
        utf8_decode(j.at("api_related_perm_string").get<std::string>());
    sig.source_sha256 = j.at("source_sha256").get<std::string>();
    return sig;
}

} // namespace

std::string group_set_to_json(const group_set& gs) {
    json doc;
    doc["format_version"] = 1;
    doc["t_s"] = gs.t_s;
    doc["weights"] = {gs.weights.api, gs.weights.cmd, gs.weights.perm};
    json groups = json::array();
    for (const auto& g : gs.groups) {
        groups.push_back({{"id", g.id},
                          {"signature", signature_to_json(g.signature)},
                          {"members", g.members}});
    }
    doc["groups"] = std::move(groups);
    return doc.dump(2) + "\n";
}

group_set group_set_from_json(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw error(errc::schema_violation, "group set is not a JSON object");
    }
    if (doc.value("format_version", 0) != 1) {
        throw error(errc::version_mismatch, "group set file format_version");
    }
    group_set gs;
    gs.t_s = doc.at("t_s").get<double>();
    auto w = doc.at("weights");
    gs.weights.api = w.at(0).get<double>();
    gs.weights.cmd = w.at(1).get<double>();
    gs.weights.perm = w.at(2).get<double>();
    for (const auto& g : doc.at("groups")) {
        malware_group group;
        group.id = g.at("id").get<int>();
        group.signature = signature_from_json(g.at("signature"));
        for (const auto& m : g.at("members")) {
            group.members.push_back(m.get<std::string>());
        }
        gs.groups.push_back(std::move(group));
    }
    return gs;
}

} // namespace apksift
