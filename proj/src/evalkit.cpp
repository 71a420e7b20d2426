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

#include "apksift/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "apksift/error.hpp"
#include "apksift/ingest.hpp"

namespace apksift {

using nlohmann::json;

namespace {

/// mt19937_64 output is pinned by the standard, so modulo reduction keeps
/// every draw reproducible across platforms; the slight bias is irrelevant
/// for corpus synthesis.
std::size_t draw_below(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

template <typename T>
void shuffle_deterministic(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = draw_below(rng, i);
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace

std::vector<std::vector<std::size_t>> kfold_split(std::size_t corpus_size,
                                                  std::size_t k,
                                                  std::uint64_t seed) {
    if (k < 2 || corpus_size < k) {
        throw error(errc::corpus_too_small,
                    std::to_string(corpus_size) + " entries cannot fill " +
                        std::to_string(k) + " folds");
    }
    std::vector<std::size_t> order(corpus_size);
    for (std::size_t i = 0; i < corpus_size; ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    shuffle_deterministic(order, rng);

    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t i = 0; i < order.size(); ++i) {
        folds[i % k].push_back(order[i]);
    }
    return folds;
}

std::vector<app_profile> extract_corpus_profiles(const labeled_corpus& corpus,
                                                 const feature_config& cfg) {
    std::vector<app_profile> out;
    out.reserve(corpus.entries.size());
    for (const auto& e : corpus.entries) {
        app_profile p = extract_profile(e.raw, cfg);
        p.label = e.label;
        out.push_back(std::move(p));
    }
    return out;
}

std::map<std::string, std::string> corpus_label_index(
    const labeled_corpus& corpus) {
    std::map<std::string, std::string> out;
    for (const auto& e : corpus.entries) {
        out[e.raw.sha256] = e.label.malicious ? e.label.family : "benign";
    }
    return out;
}

cv_report run_cv(const labeled_corpus& corpus, const feature_config& cfg,
                 const eval_params& params, std::size_t k,
                 std::uint64_t seed) {
    params.detector.validate();
    params.weights.validate();

    const auto folds = corpus.folds
                           ? *corpus.folds
                           : kfold_split(corpus.entries.size(), k, seed);
    const auto profiles = extract_corpus_profiles(corpus, cfg);
    const auto labels = corpus_label_index(corpus);

    cv_report report;
    double accuracy_sum = 0.0;

    for (std::size_t fold = 0; fold < folds.size(); ++fold) {
        std::vector<app_profile> training;
        std::vector<app_profile> training_malicious;
        for (std::size_t other = 0; other < folds.size(); ++other) {
            if (other == fold) continue;
            for (std::size_t idx : folds[other]) {
                training.push_back(profiles[idx]);
                if (profiles[idx].label->malicious) {
                    training_malicious.push_back(profiles[idx]);
                }
            }
        }
        bool has_benign = std::any_of(
            training.begin(), training.end(),
            [](const app_profile& p) { return !p.label->malicious; });
        if (training_malicious.empty() || !has_benign) {
            throw error(errc::fold_degenerate,
                        "training split of fold " + std::to_string(fold) +
                            " is missing a category");
        }

        likelihood_model model = train(training, cfg);
        serial_blacklist bl = build_blacklist(training_malicious, cfg);

        std::vector<app_profile> held_out;
        for (std::size_t idx : folds[fold]) held_out.push_back(profiles[idx]);

        fold_result result;
        std::vector<app_profile> flagged;
        for (const auto& p : held_out) {
            verdict v = detect(p, bl, model, params.detector);
            const bool actual = p.label->malicious;
            if (v.malicious) {
                if (actual) {
                    ++result.confusion.tp;
                } else {
                    ++result.confusion.fp;
                }
                flagged.push_back(p);
            } else {
                if (actual) {
                    ++result.confusion.fn;
                } else {
                    ++result.confusion.tn;
                }
            }
        }

        group_set groups =
            classify_stream(flagged, cfg, params.t_s, params.weights);
        result.classification = group_accuracy(groups, labels);

        accuracy_sum += result.confusion.accuracy();
        report.combined += result.confusion;
        for (const auto& [family, acc] : result.classification.per_family) {
            auto& pooled = report.per_family[family];
            pooled.samples += acc.samples;
            pooled.correct += acc.correct;
        }
        report.folds.push_back(std::move(result));
    }

    report.mean_detection_accuracy =
        report.folds.empty() ? 0.0
                             : accuracy_sum /
                                   static_cast<double>(report.folds.size());
    std::uint64_t total = 0;
    std::uint64_t correct = 0;
    for (auto& [family, acc] : report.per_family) {
        acc.accuracy = acc.samples == 0 ? 0.0
                                        : static_cast<double>(acc.correct) /
                                              static_cast<double>(acc.samples);
        total += acc.samples;
        correct += acc.correct;
    }
    report.overall_classification_accuracy =
        total == 0 ? 0.0
                   : static_cast<double>(correct) / static_cast<double>(total);
    return report;
}

std::string cv_report_to_json(const cv_report& report) {
    json doc;
    doc["format_version"] = 1;
    json folds = json::array();
    for (const auto& f : report.folds) {
        json fold;
        fold["confusion"] = {{"tp", f.confusion.tp},
                             {"fn", f.confusion.fn},
                             {"fp", f.confusion.fp},
                             {"tn", f.confusion.tn}};
        fold["detection_accuracy"] = f.confusion.accuracy();
        fold["classification_accuracy"] = f.classification.overall;
        folds.push_back(std::move(fold));
    }
    doc["folds"] = std::move(folds);
    doc["confusion"] = {{"tp", report.combined.tp},
                        {"fn", report.combined.fn},
                        {"fp", report.combined.fp},
                        {"tn", report.combined.tn}};
    doc["mean_detection_accuracy"] = report.mean_detection_accuracy;
    doc["overall_classification_accuracy"] =
        report.overall_classification_accuracy;
    json families = json::object();
    for (const auto& [family, acc] : report.per_family) {
        families[family] = {{"samples", acc.samples},
                            {"correct", acc.correct},
                            {"accuracy", acc.accuracy}};
    }
    doc["per_family"] = std::move(families);
    return doc.dump(2) + "\n";
}

namespace {

// requested-permission request rates (percent) for the rate_table mode,
// in default critical-permission order
constexpr permission_rate_row kPermissionRates[] = {
    {"ACCESS_COARSE_LOCATION", 16.61, 53.78},
    {"ACCESS_FINE_LOCATION", 16.96, 51.89},
    {"CALL_PHONE", 6.57, 26.92},
    {"INSTALL_PACKAGES", 0.32, 12.67},
    {"PROCESS_OUTGOING_CALLS", 0.63, 1.80},
    {"READ_CONTACTS", 5.82, 24.95},
    {"READ_SMS", 1.22, 27.82},
    {"SEND_SMS", 1.82, 43.98},
    {"WRITE_CONTACTS", 2.08, 1.47},
    {"BLUETOOTH", 1.51, 4.04},
    {"BLUETOOTH_ADMIN", 1.21, 2.77},
    {"GET_ACCOUNTS", 4.40, 4.90},
    {"MOUNT_UNMOUNT_FILESYSTEMS", 0.80, 20.62},
    {"NFC", 0.26, 0.04},
    {"READ_CALENDAR", 0.97, 0.04},
    {"READ_HISTORY_BOOKMARKS", 0.93, 7.88},
    {"READ_LOGS", 1.39, 28.59},
    {"READ_PHONE_STATE", 24.10, 96.55},
    {"RECEIVE_MMS", 0.20, 1.05},
    {"RECEIVE_SMS", 1.66, 37.66},
    {"RECEIVE_WAP_PUSH", 0.05, 3.01},
    {"RECORD_AUDIO", 3.13, 22.20},
    {"WRITE_CALENDAR", 0.85, 0.00},
    {"WRITE_EXTERNAL_STORAGE", 32.25, 82.50},
    {"WRITE_HISTORY_BOOKMARKS", 0.57, 7.07},
    {"WRITE_SMS", 0.77, 5.67},
};

std::string synthetic_sha(std::uint64_t seed, std::size_t index) {
    std::string key =
        "synthetic:" + std::to_string(seed) + ":" + std::to_string(index);
    return sha256_hex(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(key.data()), key.size()));
}

serial_number make_serial(std::mt19937_64& rng) {
    std::vector<std::uint8_t> bytes(8);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng() & 0xff);
    if (bytes[0] == 0) bytes[0] = 1;  // keep the display width stable
    return serial_number(bytes);
}

std::string family_name(std::size_t f) {
    std::string n = std::to_string(f);
    if (n.size() < 2) n.insert(0, "0");
    return "family_" + n;
}

} // namespace

std::span<const permission_rate_row> permission_rate_table() {
    return kPermissionRates;
}

synthetic_corpus gen_synthetic_corpus(const corpus_spec& spec,
                                      std::uint64_t seed) {
    const std::size_t n_malicious = spec.n_families * spec.samples_per_family;
    if (n_malicious + spec.n_benign == 0) {
        throw error(errc::bad_spec, "corpus spec produces zero samples");
    }
    if (spec.n_families > 0 && spec.samples_per_family == 0) {
        throw error(errc::bad_spec, "families declared but no samples each");
    }

    std::mt19937_64 rng(seed);
    const feature_config cfg = default_config();

    synthetic_corpus out;
    out.manifest.seed = seed;
    out.manifest.mode = spec.mode == permission_mode::rate_table
                            ? "rate_table"
                            : "family_pattern";

    // command list in set order (lexicographic), for slicing
    std::vector<std::string> commands(cfg.command_list.begin(),
                                      cfg.command_list.end());

    // per-family repertoires: disjoint API/command/permission slices as long
    // as the family count allows, wrapping after that
    std::vector<family_ground_truth> families(spec.n_families);
    std::vector<std::vector<serial_number>> family_serials(spec.n_families);
    std::vector<serial_number> shared;
    for (std::size_t f = 0; f < spec.n_families; ++f) {
        auto& fam = families[f];
        fam.name = family_name(f);
        for (std::size_t a = 0; a < 3; ++a) {
            fam.apis.push_back(
                cfg.suspicious_apis[(3 * f + a) % cfg.suspicious_apis.size()].id);
        }
        for (std::size_t c = 0; c < 2; ++c) {
            fam.commands.push_back(commands[(2 * f + c) % commands.size()]);
        }
        for (std::size_t p = 0; p < 3; ++p) {
            fam.permissions.push_back(
                cfg.critical_permissions[(3 * f + p) %
                                         cfg.critical_permissions.size()]);
        }
        for (std::size_t s = 0; s < spec.serials_per_family; ++s) {
            family_serials[f].push_back(make_serial(rng));
            fam.serials.push_back(family_serials[f].back().display());
        }
    }
    if (spec.n_families >= 2) {
        for (std::size_t s = 0; s < spec.shared_serials; ++s) {
            shared.push_back(make_serial(rng));
            out.manifest.shared_serials.push_back(shared.back().display());
        }
    }
    out.manifest.families = families;

    // rate_table mode: exact per-permission counts over each category, so
    // the empirical rate lands within rounding of the reference table
    std::vector<std::vector<std::uint8_t>> benign_perms(
        spec.n_benign, std::vector<std::uint8_t>(kCriticalPermissionCount, 0));
    std::vector<std::vector<std::uint8_t>> malicious_perms(
        n_malicious, std::vector<std::uint8_t>(kCriticalPermissionCount, 0));
    if (spec.mode == permission_mode::rate_table) {
        auto assign = [&rng](std::vector<std::vector<std::uint8_t>>& rows,
                             std::size_t j, double percent) {
            if (rows.empty()) return;
            auto k = static_cast<std::size_t>(
                std::llround(percent / 100.0 *
                             static_cast<double>(rows.size())));
            std::vector<std::size_t> order(rows.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            shuffle_deterministic(order, rng);
            for (std::size_t i = 0; i < k; ++i) rows[order[i]][j] = 1;
        };
        for (std::size_t j = 0; j < kCriticalPermissionCount; ++j) {
            assign(benign_perms, j, kPermissionRates[j].requested_benign);
            assign(malicious_perms, j, kPermissionRates[j].requested_malware);
        }
    }

    std::size_t sample_index = 0;

    // malicious samples, family by family
    for (std::size_t f = 0; f < spec.n_families; ++f) {
        const auto& fam = families[f];
        bool conceals_sms =
            std::find(fam.apis.begin(), fam.apis.end(), "abortBroadcast") !=
            fam.apis.end();
        for (std::size_t i = 0; i < spec.samples_per_family; ++i) {
            raw_package pkg;
            pkg.sha256 = synthetic_sha(seed, sample_index);
            pkg.manifest.app_name = fam.name + "." + std::to_string(i);

            // serial: usually family-owned, sometimes one shared with the
            // neighbouring family
            bool use_shared = !shared.empty() && draw_below(rng, 10) < 3;
            if (use_shared) {
                std::size_t s = (f + draw_below(rng, shared.size())) %
                                shared.size();
                pkg.cert_serials.push_back(shared[s]);
            } else {
                pkg.cert_serials.push_back(
                    family_serials[f][draw_below(
                        rng, family_serials[f].size())]);
            }

            if (spec.mode == permission_mode::rate_table) {
                std::size_t row = f * spec.samples_per_family + i;
                for (std::size_t j = 0; j < kCriticalPermissionCount; ++j) {
                    if (malicious_perms[row][j]) {
                        pkg.manifest.requested_permissions.insert(
                            cfg.critical_permissions[j]);
                    }
                }
            } else {
                for (const auto& perm : fam.permissions) {
                    pkg.manifest.requested_permissions.insert(perm);
                }
            }

            // API sequence: the family repertoire repeated, plus a cycling
            // tail of 0..api_jitter extra occurrences of the first API
            pkg.dex_strings.push_back("L" + fam.name + "/Payload;");
            for (std::size_t r = 0; r < spec.api_repeats; ++r) {
                for (const auto& api : fam.apis) {
                    pkg.dex_strings.push_back(api);
                }
            }
            std::size_t extra =
                spec.api_jitter == 0 ? 0 : i % (spec.api_jitter + 1);
            for (std::size_t e = 0; e < extra; ++e) {
                pkg.dex_strings.push_back(fam.apis[0]);
            }
            for (const auto& cmd : fam.commands) {
                pkg.dex_strings.push_back("/system/bin/" + cmd);
            }

            if (conceals_sms) {
                pkg.manifest.intent_filters.push_back(
                    {"android.provider.Telephony.SMS_RECEIVED", 2147483647});
            } else {
                pkg.manifest.intent_filters.push_back(
                    {"android.intent.action.MAIN", std::nullopt});
            }

            pkg.size_bytes = 4096 + 16 * pkg.dex_strings.size();
            out.corpus.entries.push_back(
                {std::move(pkg), label_info{true, fam.name}});
            ++sample_index;
        }
    }

    // benign samples: unique serials with a small shared pool, innocuous
    // strings, never a command or an SMS-concealment pair
    std::vector<serial_number> benign_pool;
    for (std::size_t i = 0; i < std::max<std::size_t>(spec.n_benign / 20, 1);
         ++i) {
        benign_pool.push_back(make_serial(rng));
    }
    for (std::size_t i = 0; i < spec.n_benign; ++i) {
        raw_package pkg;
        pkg.sha256 = synthetic_sha(seed, sample_index);
        pkg.manifest.app_name = "benign." + std::to_string(i);
        if (draw_below(rng, 100) < 15) {
            pkg.cert_serials.push_back(
                benign_pool[draw_below(rng, benign_pool.size())]);
        } else {
            pkg.cert_serials.push_back(make_serial(rng));
        }

        if (spec.mode == permission_mode::rate_table) {
            for (std::size_t j = 0; j < kCriticalPermissionCount; ++j) {
                if (benign_perms[i][j]) {
                    pkg.manifest.requested_permissions.insert(
                        cfg.critical_permissions[j]);
                }
            }
        } else {
            for (std::size_t j = 0; j < kCriticalPermissionCount; ++j) {
                double rate = kPermissionRates[j].requested_benign;
                if (static_cast<double>(draw_below(rng, 10000)) <
                    rate * 100.0) {
                    pkg.manifest.requested_permissions.insert(
                        cfg.critical_permissions[j]);
                }
            }
        }

        pkg.dex_strings = {"MainActivity", "onCreate", "setContentView"};
        if (i % 5 == 0) {
            pkg.dex_strings.push_back("getDeviceId");  // one sensitive API
        }
        pkg.manifest.intent_filters.push_back(
            {"android.intent.action.MAIN", std::nullopt});
        pkg.size_bytes = 2048 + 16 * pkg.dex_strings.size();
        out.corpus.entries.push_back(
            {std::move(pkg), label_info{false, ""}});
        ++sample_index;
    }

    return out;
}

std::string synthetic_manifest_to_json(const synthetic_manifest& manifest) {
    json doc;
    doc["format_version"] = 1;
    doc["seed"] = manifest.seed;
    doc["mode"] = manifest.mode;
    doc["shared_serials"] = manifest.shared_serials;
    json families = json::array();
    for (const auto& f : manifest.families) {
        families.push_back({{"name", f.name},
                            {"apis", f.apis},
                            {"commands", f.commands},
                            {"serials", f.serials},
                            {"permissions", f.permissions}});
    }
    doc["families"] = std::move(families);
    return doc.dump(2) + "\n";
}

} // namespace apksift
