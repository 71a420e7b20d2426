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

#ifndef APKSIFT_DETECTOR_HPP
#define APKSIFT_DETECTOR_HPP

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "apksift/blacklist.hpp"
#include "apksift/likelihood.hpp"

namespace apksift {

/// One value per stage, in stage order.
enum class detect_reason : int {
    blacklist = 1,
    root_command = 2,
    sms_concealment = 3,
    likelihood_behavior = 4,
};

std::string_view detect_reason_name(detect_reason r);

enum class gate_combine { any, all };

struct detector_params {
    double t_l = 1.0;
    int sensitive_threshold = 2;   // distinct sensitive APIs that suffice
    bool short_circuit = true;     // stop at the first firing stage
    /// stage-4 operators; the defaults read as
    /// (Λ_req > T_L  OR  Λ_api > T_L)  AND  (sends_sms OR sensitive-enough)
    gate_combine channel_combine = gate_combine::any;
    gate_combine behavior_combine = gate_combine::all;

    void validate() const;  // T_L > 0, sensitive_threshold in [1, 4]
};

struct verdict {
    bool malicious = false;
    std::vector<detect_reason> reasons;       // stage order, one per stage
    double lambda_requested = 1.0;            // always computed
    double lambda_api_related = 1.0;
    double log_lambda_requested = 0.0;
    double log_lambda_api_related = 0.0;
    std::set<std::string> matched_commands;
    std::vector<detect_reason> stage_trace;   // stages actually evaluated
};

/// Four-stage detection: blacklist gate (requires at least one suspicious
/// API, to avoid over-detecting), root-command gate, SMS-concealment gate,
/// then the likelihood + behavior gate. Pure function; throws
/// errc::config_mismatch when profile and model fingerprints differ.
verdict detect(const app_profile& profile, const serial_blacklist& bl,
               const likelihood_model& model, const detector_params& params);

struct batch_item {
    std::string sha256;
    std::optional<verdict> result;
    std::string error_message;  // set iff result is empty
};

/// Element-wise detect; output order matches input order regardless of
/// worker count (0 workers = hardware concurrency). Per-item errors are
/// collected in the result, not thrown.
std::vector<batch_item> detect_batch(std::span<const app_profile> profiles,
                                     const serial_blacklist& bl,
                                     const likelihood_model& model,
                                     const detector_params& params,
                                     unsigned workers = 0);

/// One JSON object, no trailing newline: the verdict report line format.
std::string verdict_to_json_line(const std::string& sha256, const verdict& v);

} // namespace apksift

#endif
