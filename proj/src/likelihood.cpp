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

#include "apksift/likelihood.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "apksift/error.hpp"

namespace apksift {

using nlohmann::json;

std::string_view perm_channel_name(perm_channel c) {
    return c == perm_channel::requested ? "requested" : "api_related";
}

double laplace_probability(std::uint64_t count, std::uint64_t n) {
    return (static_cast<double>(count) + 1.0) / (static_cast<double>(n) + 2.0);
}

likelihood_model train(std::span<const app_profile> profiles,
                       const feature_config& cfg) {
    const std::size_t dim = cfg.critical_permissions.size();
    const std::string fp = cfg.fingerprint();

    likelihood_model model;
    model.cfg_fingerprint = fp;
    model.requested.count_benign.assign(dim, 0);
    model.requested.count_malicious.assign(dim, 0);
    model.api_related.count_benign.assign(dim, 0);
    model.api_related.count_malicious.assign(dim, 0);

    for (const auto& p : profiles) {
        if (!p.label) {
            throw error(errc::unlabeled_sample, "profile " + p.sha256);
        }
        if (p.cfg_fingerprint != fp) {
            throw error(errc::config_mismatch,
                        "profile " + p.sha256 +
                            " was extracted under a different config");
        }
        if (p.requested_critical.size() != dim ||
            p.api_related_critical.size() != dim) {
            throw error(errc::dimension_mismatch,
                        "profile " + p.sha256 + " has wrong vector dimension");
        }
        const bool mal = p.label->malicious;
        auto tally = [dim, mal](channel_counts& ch,
                                std::span<const std::uint8_t> a) {
            auto& n = mal ? ch.n_malicious : ch.n_benign;
            auto& counts = mal ? ch.count_malicious : ch.count_benign;
            ++n;
            for (std::size_t j = 0; j < dim; ++j) {
                if (a[j]) ++counts[j];
            }
        };
        tally(model.requested, p.requested_critical);
        tally(model.api_related, p.api_related_critical);
    }

    if (model.requested.n_benign == 0 || model.requested.n_malicious == 0) {
        throw error(errc::empty_category,
                    model.requested.n_benign == 0 ? "no benign samples"
                                                  : "no malicious samples");
    }
    return model;
}

double log_likelihood_ratio(const likelihood_model& model, perm_channel c,
                            std::span<const std::uint8_t> a) {
    const channel_counts& ch = model.channel(c);
    if (a.size() != ch.count_benign.size()) {
        throw error(errc::dimension_mismatch,
                    "vector has " + std::to_string(a.size()) +
                        " coordinates, model expects " +
                        std::to_string(ch.count_benign.size()));
    }
    double log_sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double p_mal = laplace_probability(ch.count_malicious[j], ch.n_malicious);
        double p_ben = laplace_probability(ch.count_benign[j], ch.n_benign);
        if (!a[j]) {
            p_mal = 1.0 - p_mal;
            p_ben = 1.0 - p_ben;
        }
        log_sum += std::log(p_mal) - std::log(p_ben);
    }
    return log_sum;
}

double likelihood_ratio(const likelihood_model& model, perm_channel c,
                        std::span<const std::uint8_t> a) {
    return std::exp(log_likelihood_ratio(model, c, a));
}

bool exceeds_threshold(const likelihood_model& model, perm_channel c,
                       std::span<const std::uint8_t> a, double t_l) {
    return log_likelihood_ratio(model, c, a) > std::log(t_l);
}

namespace {

json counts_to_json(const channel_counts& ch) {
    return json{{"n_benign", ch.n_benign},
                {"n_malicious", ch.n_malicious},
                {"counts_benign", ch.count_benign},
                {"counts_malicious", ch.count_malicious}};
}

channel_counts counts_from_json(const json& j) {
    channel_counts ch;
    ch.n_benign = j.at("n_benign").get<std::uint64_t>();
    ch.n_malicious = j.at("n_malicious").get<std::uint64_t>();
    ch.count_benign = j.at("counts_benign").get<std::vector<std::uint64_t>>();
    ch.count_malicious =
        j.at("counts_malicious").get<std::vector<std::uint64_t>>();
    if (ch.count_benign.size() != ch.count_malicious.size()) {
        throw error(errc::schema_violation, "channel count arrays disagree");
    }
    for (std::size_t j2 = 0; j2 < ch.count_benign.size(); ++j2) {
        if (ch.count_benign[j2] > ch.n_benign ||
            ch.count_malicious[j2] > ch.n_malicious) {
            throw error(errc::schema_violation,
                        "per-permission count exceeds sample count");
        }
    }
    return ch;
}

} // namespace

std::string model_to_json(const likelihood_model& model) {
    json doc;
    doc["format_version"] = 1;
    doc["cfg_fingerprint"] = model.cfg_fingerprint;
    doc["channels"] = {{"requested", counts_to_json(model.requested)},
                       {"api_related", counts_to_json(model.api_related)}};
    return doc.dump(2) + "\n";
}

likelihood_model model_from_json(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw error(errc::schema_violation, "model file is not a JSON object");
    }
    if (doc.value("format_version", 0) != 1) {
        throw error(errc::version_mismatch, "model file format_version");
    }
    likelihood_model model;
    model.cfg_fingerprint = doc.at("cfg_fingerprint").get<std::string>();
    model.requested = counts_from_json(doc.at("channels").at("requested"));
    model.api_related = counts_from_json(doc.at("channels").at("api_related"));
    if (model.requested.count_benign.size() !=
        model.api_related.count_benign.size()) {
        throw error(errc::schema_violation, "channel dimensions disagree");
    }
    return model;
}

} // namespace apksift
