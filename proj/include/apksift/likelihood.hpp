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

#ifndef APKSIFT_LIKELIHOOD_HPP
#define APKSIFT_LIKELIHOOD_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "apksift/features.hpp"

namespace apksift {

enum class perm_channel { requested, api_related };

std::string_view perm_channel_name(perm_channel c);

/// Per-channel training tallies. Raw counts, never pre-divided
/// probabilities: smoothing happens at query time and serialization is
/// lossless, so incremental retraining stays exact.
struct channel_counts {
    std::uint64_t n_benign = 0;
    std::uint64_t n_malicious = 0;
    std::vector<std::uint64_t> count_benign;
    std::vector<std::uint64_t> count_malicious;

    bool operator==(const channel_counts&) const = default;
};

struct likelihood_model {
    channel_counts requested;
    channel_counts api_related;
    std::string cfg_fingerprint;

    const channel_counts& channel(perm_channel c) const {
        return c == perm_channel::requested ? requested : api_related;
    }
    std::size_t dimension() const { return requested.count_benign.size(); }

    bool operator==(const likelihood_model&) const = default;
};

/// Laplace estimate (count + 1) / (n + 2); strictly inside (0, 1).
double laplace_probability(std::uint64_t count, std::uint64_t n);

/// Tallies both permission channels from labeled profiles.
/// Throws errc::empty_category when either category has no sample,
/// errc::unlabeled_sample on an unlabeled profile, errc::config_mismatch
/// when a profile was extracted under a different critical-permission list.
likelihood_model train(std::span<const app_profile> profiles,
                       const feature_config& cfg);

/// log Λ(a) = Σ_j [log P(a_j | malicious) − log P(a_j | benign)], using
/// P(a_j = 0 | c) = 1 − P(a_j = 1 | c). Every coordinate contributes a
/// factor, present or absent. Throws errc::dimension_mismatch.
double log_likelihood_ratio(const likelihood_model& model, perm_channel c,
                            std::span<const std::uint8_t> a);

/// exp of the log-sum; the log form is what comparisons should use.
double likelihood_ratio(const likelihood_model& model, perm_channel c,
                        std::span<const std::uint8_t> a);

/// Λ(a) > T_L, evaluated in log space. Strict inequality: a tie at the
/// threshold resolves benign.
bool exceeds_threshold(const likelihood_model& model, perm_channel c,
                       std::span<const std::uint8_t> a, double t_l);

std::string model_to_json(const likelihood_model& model);
likelihood_model model_from_json(const std::string& text);

} // namespace apksift

#endif
