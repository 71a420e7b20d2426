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

#include "apksift/detector.hpp"

#include <cmath>
#include <limits>
#include <thread>

#include <nlohmann/json.hpp>

#include "apksift/error.hpp"

namespace apksift {

using nlohmann::json;

std::string_view detect_reason_name(detect_reason r) {
    switch (r) {
    case detect_reason::blacklist: return "BLACKLIST";
    case detect_reason::root_command: return "ROOT_COMMAND";
    case detect_reason::sms_concealment: return "SMS_CONCEALMENT";
    case detect_reason::likelihood_behavior: return "LIKELIHOOD_BEHAVIOR";
    }
    return "?";
}

void detector_params::validate() const {
    if (!(t_l > 0.0)) {
        throw error(errc::config_invalid, "T_L must be positive");
    }
    if (sensitive_threshold < 1 || sensitive_threshold > 4) {
        throw error(errc::config_invalid,
                    "sensitive_threshold must lie in [1, 4]");
    }
}

namespace {

double safe_exp(double log_value) {
    double v = std::exp(log_value);
    if (std::isinf(v)) return std::numeric_limits<double>::max();
    return v;
}

bool combine(gate_combine op, bool a, bool b) {
    return op == gate_combine::any ? (a || b) : (a && b);
}

} // namespace

verdict detect(const app_profile& profile, const serial_blacklist& bl,
               const likelihood_model& model, const detector_params& params) {
    params.validate();
    if (profile.cfg_fingerprint != model.cfg_fingerprint) {
        throw error(errc::config_mismatch,
                    "profile " + profile.sha256 +
                        " and model disagree on the critical-permission list");
    }

    verdict v;
    v.matched_commands = profile.commands;
    // both ratios are always reported, whichever stage decides
    v.log_lambda_requested = log_likelihood_ratio(
        model, perm_channel::requested, profile.requested_critical);
    v.log_lambda_api_related = log_likelihood_ratio(
        model, perm_channel::api_related, profile.api_related_critical);
    v.lambda_requested = safe_exp(v.log_lambda_requested);
    v.lambda_api_related = safe_exp(v.log_lambda_api_related);

    const double log_t_l = std::log(params.t_l);

    auto evaluate = [&](detect_reason stage) -> bool {
        switch (stage) {
        case detect_reason::blacklist:
            // serials in the blacklist but no suspicious API at all are
            // skipped to avoid over-detecting
            return blacklist_contains(bl, profile.serials) &&
                   !profile.api_string.empty();
        case detect_reason::root_command:
            return !profile.commands.empty();
        case detect_reason::sms_concealment:
            return profile.sends_sms && profile.hides_sms;
        case detect_reason::likelihood_behavior: {
            bool likely = combine(params.channel_combine,
                                  v.log_lambda_requested > log_t_l,
                                  v.log_lambda_api_related > log_t_l);
            bool behaves = profile.sends_sms ||
                           profile.sensitive_count >= params.sensitive_threshold;
            return combine(params.behavior_combine, likely, behaves);
        }
        }
        return false;
    };

    for (detect_reason stage :
         {detect_reason::blacklist, detect_reason::root_command,
          detect_reason::sms_concealment, detect_reason::likelihood_behavior}) {
        v.stage_trace.push_back(stage);
        if (evaluate(stage)) {
            v.reasons.push_back(stage);
            if (params.short_circuit) break;
        }
    }
    v.malicious = !v.reasons.empty();
    return v;
}

std::vector<batch_item> detect_batch(std::span<const app_profile> profiles,
                                     const serial_blacklist& bl,
                                     const likelihood_model& model,
                                     const detector_params& params,
                                     unsigned workers) {
    std::vector<batch_item> out(profiles.size());
    if (profiles.empty()) return out;

    if (workers == 0) {
        workers = std::thread::hardware_concurrency();
        if (workers == 0) workers = 1;
    }
    workers = std::min<unsigned>(workers,
                                 static_cast<unsigned>(profiles.size()));

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            out[i].sha256 = profiles[i].sha256;
            try {
                out[i].result = detect(profiles[i], bl, model, params);
            } catch (const error& e) {
                out[i].error_message = e.what();
            }
        }
    };

    if (workers == 1) {
        run_range(0, profiles.size());
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (profiles.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t begin = static_cast<std::size_t>(w) * chunk;
        std::size_t end = std::min(begin + chunk, profiles.size());
        if (begin >= end) break;
        pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
    return out;
}

std::string verdict_to_json_line(const std::string& sha256, const verdict& v) {
    json line;
    line["sha256"] = sha256;
    line["decision"] = v.malicious ? "malicious" : "benign";
    json reasons = json::array();
    for (auto r : v.reasons) reasons.push_back(std::string(detect_reason_name(r)));
    line["reasons"] = std::move(reasons);
    line["lambda_requested"] = v.lambda_requested;
    line["lambda_api_related"] = v.lambda_api_related;
    line["matched_commands"] = v.matched_commands;
    json trace = json::array();
    for (auto r : v.stage_trace) {
        trace.push_back(std::string(detect_reason_name(r)));
    }
    line["stage_trace"] = std::move(trace);
    return line.dump();
}

} // namespace apksift
