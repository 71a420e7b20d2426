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

#ifndef APKSIFT_EVALKIT_HPP
#define APKSIFT_EVALKIT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apksift/classifier.hpp"
#include "apksift/detector.hpp"
#include "apksift/features.hpp"
#include "apksift/raw_package.hpp"

namespace apksift {

struct labeled_entry {
    raw_package raw;
    label_info label;
};

struct labeled_corpus {
    std::vector<labeled_entry> entries;
    std::optional<std::vector<std::vector<std::size_t>>> folds;
};

/// Malicious is the positive class.
struct confusion_matrix {
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fn + fp + tn; }
    double accuracy() const {
        return total() == 0 ? 0.0
                            : static_cast<double>(tp + tn) /
                                  static_cast<double>(total());
    }
    confusion_matrix& operator+=(const confusion_matrix& o) {
        tp += o.tp;
        fn += o.fn;
        fp += o.fp;
        tn += o.tn;
        return *this;
    }
};

/// Seeded shuffle then round-robin partition: fold sizes differ by at most
/// one; deterministic for a fixed seed on every platform. Throws
/// errc::corpus_too_small when k < 2 or corpus_size < k.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t corpus_size,
                                                  std::size_t k,
                                                  std::uint64_t seed);

struct eval_params {
    detector_params detector;
    double t_s = 0.7;
    similarity_weights weights;
};

struct fold_result {
    confusion_matrix confusion;
    accuracy_report classification;  // over detector-flagged samples only
};

struct cv_report {
    std::vector<fold_result> folds;
    confusion_matrix combined;  // summed over folds
    double mean_detection_accuracy = 0.0;
    std::map<std::string, family_accuracy> per_family;  // pooled over folds
    double overall_classification_accuracy = 0.0;
};

/// Per fold: trains the likelihood model and rebuilds the blacklist on the
/// other k−1 folds (fold-local, the only leak-free reading), detects the
/// held-out fold, and classifies the samples flagged malicious. Throws
/// errc::fold_degenerate when a training split misses a category.
cv_report run_cv(const labeled_corpus& corpus, const feature_config& cfg,
                 const eval_params& params, std::size_t k, std::uint64_t seed);

std::string cv_report_to_json(const cv_report& report);

enum class permission_mode {
    rate_table,      // empirical requested rates match the reference table
    family_pattern,  // fixed per-family permission slices, separable
};

struct corpus_spec {
    std::size_t n_families = 5;
    std::size_t samples_per_family = 40;
    std::size_t n_benign = 400;
    permission_mode mode = permission_mode::family_pattern;
    std::size_t serials_per_family = 2;
    /// serials deliberately shared between adjacent families, so the
    /// multi-family blacklist rule has something to convict
    std::size_t shared_serials = 2;
    std::size_t api_repeats = 3;  // family API sequence = apis repeated
    std::size_t api_jitter = 2;   // extra trailing symbols, cycling 0..jitter
};

struct family_ground_truth {
    std::string name;
    std::vector<std::string> apis;
    std::vector<std::string> commands;
    std::vector<std::string> serials;       // displays
    std::vector<std::string> permissions;   // requested slice (family mode)
};

struct synthetic_manifest {
    std::vector<family_ground_truth> families;
    std::vector<std::string> shared_serials;  // displays
    std::string mode;
    std::uint64_t seed = 0;
};

struct synthetic_corpus {
    labeled_corpus corpus;
    synthetic_manifest manifest;
};

/// Deterministic generator: same spec and seed give an identical corpus,
/// entry for entry. Throws errc::bad_spec when there is nothing to build.
synthetic_corpus gen_synthetic_corpus(const corpus_spec& spec,
                                      std::uint64_t seed);

std::string synthetic_manifest_to_json(const synthetic_manifest& manifest);

struct permission_rate_row {
    const char* name;
    double requested_benign;   // percent
    double requested_malware;  // percent
};

/// Reference per-permission request rates (percent) used by the rate_table
/// generator mode, in default critical-permission order.
std::span<const permission_rate_row> permission_rate_table();

/// Extracts profiles for the whole corpus and stamps labels on them.
std::vector<app_profile> extract_corpus_profiles(const labeled_corpus& corpus,
                                                 const feature_config& cfg);

/// sha256 -> label string ("benign" or the family name).
std::map<std::string, std::string> corpus_label_index(
    const labeled_corpus& corpus);

} // namespace apksift

#endif
