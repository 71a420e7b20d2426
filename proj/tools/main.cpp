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

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "apksift/blacklist.hpp"
#include "apksift/classifier.hpp"
#include "apksift/detector.hpp"
#include "apksift/error.hpp"
#include "apksift/evalkit.hpp"
#include "apksift/ingest.hpp"
#include "apksift/likelihood.hpp"
#include "apksift/workspace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

struct common_options {
    std::string workspace_dir;
    std::string config_path;
};

apksift::similarity_weights parse_weights(const std::string& text) {
    apksift::similarity_weights w;
    std::istringstream in(text);
    std::string part;
    std::vector<double> values;
    while (std::getline(in, part, ',')) {
        values.push_back(std::stod(part));
    }
    if (values.size() != 3) {
        throw apksift::error(apksift::errc::bad_weights,
                             "--weights expects w_api,w_cmd,w_perm");
    }
    w.api = values[0];
    w.cmd = values[1];
    w.perm = values[2];
    w.validate();
    return w;
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::string text = apksift::read_file(path);
    return {text.begin(), text.end()};
}

/// Labeled profiles in label-index order (the index drives training).
std::vector<apksift::app_profile> load_labeled_profiles(
    const apksift::workspace& ws, const apksift::feature_config& cfg) {
    auto labels = apksift::load_labels(ws.labels_path());
    std::vector<apksift::app_profile> out;
    out.reserve(labels.size());
    for (const auto& [sha, label] : labels) {
        fs::path path = ws.profiles_dir() / (sha + ".json");
        apksift::raw_package raw =
            apksift::load_profile(apksift::read_artifact(path));
        apksift::app_profile p = apksift::extract_profile(raw, cfg);
        p.label = label;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<fs::path> workspace_profile_paths(const apksift::workspace& ws) {
    std::vector<fs::path> paths;
    if (fs::exists(ws.profiles_dir())) {
        for (const auto& entry : fs::directory_iterator(ws.profiles_dir())) {
            if (entry.is_regular_file() &&
                entry.path().extension() == ".json") {
                paths.push_back(entry.path());
            }
        }
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

int cmd_extract(const common_options& common,
                const std::vector<std::string>& inputs,
                const std::string& labels_file) {
    apksift::workspace ws(common.workspace_dir);
    apksift::workspace_lock lock(ws);

    std::vector<fs::path> files;
    for (const auto& input : inputs) {
        fs::path p(input);
        if (fs::is_directory(p)) {
            std::vector<fs::path> inner;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() &&
                    entry.path().extension() == ".json") {
                    inner.push_back(entry.path());
                }
            }
            std::sort(inner.begin(), inner.end());
            files.insert(files.end(), inner.begin(), inner.end());
        } else {
            files.push_back(p);
        }
    }

    std::size_t ok = 0;
    std::size_t failed = 0;
    for (const auto& file : files) {
        try {
            auto bytes = read_bytes(file);
            apksift::raw_package pkg;
            if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == 'K') {
                pkg = apksift::parse_apk(bytes);
            } else {
                pkg = apksift::load_profile(
                    std::string(bytes.begin(), bytes.end()));
                if (pkg.sha256.empty()) {
                    pkg.sha256 = apksift::sha256_hex(bytes);
                }
                if (pkg.size_bytes == 0) pkg.size_bytes = bytes.size();
            }
            apksift::atomic_write(ws.profiles_dir() / (pkg.sha256 + ".json"),
                                  apksift::profile_to_json(pkg));
            std::cout << "ok " << pkg.sha256 << " " << file.string() << "\n";
            ++ok;
        } catch (const apksift::error& e) {
            std::cout << "error " << file.string() << ": " << e.what() << "\n";
            ++failed;
        }
    }

    if (!labels_file.empty()) {
        auto labels = apksift::load_labels(labels_file);  // validates
        apksift::atomic_write(ws.labels_path(),
                              apksift::read_file(labels_file));
        std::cout << "labels " << labels.size() << " entries imported\n";
    }

    std::cout << "extracted " << ok << "/" << files.size() << "\n";
    // nonzero only when every input failed
    return (!files.empty() && ok == 0) ? kExitPartial : kExitOk;
}

int cmd_train(const common_options& common) {
    apksift::workspace ws(common.workspace_dir);
    apksift::workspace_lock lock(ws);
    auto cfg = ws.load_config(common.config_path);
    auto profiles = load_labeled_profiles(ws, cfg);
    auto model = apksift::train(profiles, cfg);
    apksift::atomic_write(ws.model_path(), apksift::model_to_json(model));
    std::cout << "trained on " << model.requested.n_benign << " benign / "
              << model.requested.n_malicious << " malicious profiles\n";
    std::cout << "model " << ws.model_path().string() << "\n";
    return kExitOk;
}

int cmd_blacklist(const common_options& common) {
    apksift::workspace ws(common.workspace_dir);
    apksift::workspace_lock lock(ws);
    auto cfg = ws.load_config(common.config_path);
    auto profiles = load_labeled_profiles(ws, cfg);

    std::vector<apksift::app_profile> malicious;
    std::vector<apksift::app_profile> benign;
    for (auto& p : profiles) {
        (p.label->malicious ? malicious : benign).push_back(p);
    }
    auto bl = apksift::build_blacklist(malicious, cfg);
    apksift::atomic_write(ws.blacklist_path(), apksift::blacklist_to_text(bl));

    std::cout << "blacklist " << bl.entries.size() << " serials ("
              << bl.excluded_test_keys.size() << " test keys excluded)\n";
    auto histogram = apksift::family_histogram(malicious, cfg.test_key_serials);
    for (const auto& [families, count] : histogram) {
        std::cout << "  families=" << families << " serials=" << count << "\n";
    }
    if (!malicious.empty()) {
        auto stats = apksift::serial_stats(malicious);
        std::cout << "  malicious: mean apps per serial "
                  << stats.mean_apps_per_serial << "\n";
    }
    if (!benign.empty()) {
        auto stats = apksift::serial_stats(benign);
        std::cout << "  benign: mean apps per serial "
                  << stats.mean_apps_per_serial << "\n";
    }
    return kExitOk;
}

int cmd_scan(const common_options& common, double t_l, bool no_short_circuit,
             unsigned workers) {
    apksift::workspace ws(common.workspace_dir);
    apksift::workspace_lock lock(ws);
    auto cfg = ws.load_config(common.config_path);

    auto model = apksift::model_from_json(
        apksift::read_artifact(ws.model_path()));
    if (model.cfg_fingerprint != cfg.fingerprint()) {
        throw apksift::error(apksift::errc::config_mismatch,
                             "model was trained under a different "
                             "critical-permission list");
    }
    auto bl = apksift::blacklist_from_text(
        apksift::read_artifact(ws.blacklist_path()));

    apksift::detector_params params;
    params.t_l = t_l;
    params.short_circuit = !no_short_circuit;

    std::vector<apksift::app_profile> profiles;
    for (const auto& path : workspace_profile_paths(ws)) {
        auto raw = apksift::load_profile(apksift::read_file(path));
        profiles.push_back(apksift::extract_profile(raw, cfg));
    }

    auto verdicts = apksift::detect_batch(profiles, bl, model, params, workers);

    std::ostringstream out;
    std::size_t malicious = 0;
    std::size_t failed = 0;
    for (const auto& item : verdicts) {
        if (item.result) {
            out << apksift::verdict_to_json_line(item.sha256, *item.result)
                << "\n";
            if (item.result->malicious) ++malicious;
        } else {
            json line;
            line["sha256"] = item.sha256;
            line["error"] = item.error_message;
            out << line.dump() << "\n";
            ++failed;
        }
    }
    apksift::atomic_write(ws.verdicts_path(), out.str());
    std::cout << "scanned " << verdicts.size() << " profiles: " << malicious
              << " malicious, " << verdicts.size() - malicious - failed
              << " benign, " << failed << " errors\n";
    return failed == 0 ? kExitOk : kExitPartial;
}

int cmd_classify(const common_options& common, double t_s,
                 const std::string& weights_text, const std::string& order) {
    apksift::workspace ws(common.workspace_dir);
    apksift::workspace_lock lock(ws);
    auto cfg = ws.load_config(common.config_path);
    auto weights = parse_weights(weights_text);

    std::istringstream verdicts(apksift::read_artifact(ws.verdicts_path()));
    std::vector<std::string> malicious_shas;
    std::string line;
    while (std::getline(verdicts, line)) {
        if (line.empty()) continue;
        json v = json::parse(line, nullptr, false);
        if (v.is_discarded() || !v.is_object()) {
            throw apksift::error(apksift::errc::schema_violation,
                                 "verdicts log holds a non-JSON line");
        }
        if (v.value("decision", "") == "malicious") {
            malicious_shas.push_back(v.at("sha256").get<std::string>());
        }
    }
    if (order == "sha256") {
        std::sort(malicious_shas.begin(), malicious_shas.end());
    } else if (order != "input") {
        throw apksift::error(apksift::errc::config_invalid,
                             "--order must be 'input' or 'sha256'");
    }

    std::vector<apksift::app_profile> samples;
    for (const auto& sha : malicious_shas) {
        auto raw = apksift::load_profile(
            apksift::read_artifact(ws.profiles_dir() / (sha + ".json")));
        samples.push_back(apksift::extract_profile(raw, cfg));
    }

    auto groups = apksift::classify_stream(samples, cfg, t_s, weights);
    apksift::atomic_write(ws.groups_path(),
                          apksift::group_set_to_json(groups));
    std::cout << "classified " << samples.size() << " samples into "
              << groups.groups.size() << " groups\n";
    for (const auto& g : groups.groups) {
        std::cout << "  group " << g.id << ": " << g.members.size()
                  << " members\n";
    }
    return kExitOk;
}

void print_cv_tables(const apksift::cv_report& report) {
    const auto& m = report.combined;
    std::cout << "\nConfusion matrix (summed over folds)\n";
    std::cout << "                     Predicted\n";
    std::cout << "                     Malicious     Benign\n";
    std::cout << "Actual Malicious  " << std::setw(10) << m.tp << " (TP) "
              << std::setw(8) << m.fn << " (FN)\n";
    std::cout << "       Benign     " << std::setw(10) << m.fp << " (FP) "
              << std::setw(8) << m.tn << " (TN)\n";
    std::cout << "mean detection accuracy "
              << report.mean_detection_accuracy << "\n";

    std::cout << "\nClassification results per category\n";
    std::cout << std::left << std::setw(24) << "Category" << std::right
              << std::setw(10) << "Samples" << std::setw(12) << "Accuracy"
              << "\n";
    for (const auto& [family, acc] : report.per_family) {
        std::cout << std::left << std::setw(24) << family << std::right
                  << std::setw(10) << acc.samples << std::setw(12)
                  << std::fixed << std::setprecision(2) << acc.accuracy
                  << "\n";
        std::cout.unsetf(std::ios::fixed);
        std::cout << std::setprecision(6);
    }
    std::cout << "overall classification accuracy "
              << report.overall_classification_accuracy << "\n";
}

int cmd_eval(const common_options& common, std::size_t folds,
             std::uint64_t seed, double t_l, double t_s,
             const std::string& weights_text, bool no_short_circuit) {
    apksift::workspace ws(common.workspace_dir);
    apksift::workspace_lock lock(ws);
    auto cfg = ws.load_config(common.config_path);

    auto labels = apksift::load_labels(ws.labels_path());
    apksift::labeled_corpus corpus;
    for (const auto& [sha, label] : labels) {
        apksift::labeled_entry entry;
        entry.raw = apksift::load_profile(
            apksift::read_artifact(ws.profiles_dir() / (sha + ".json")));
        entry.label = label;
        corpus.entries.push_back(std::move(entry));
    }

    apksift::eval_params params;
    params.detector.t_l = t_l;
    params.detector.short_circuit = !no_short_circuit;
    params.t_s = t_s;
    params.weights = parse_weights(weights_text);

    auto report = apksift::run_cv(corpus, cfg, params, folds, seed);
    apksift::atomic_write(ws.cv_report_path(),
                          apksift::cv_report_to_json(report));
    print_cv_tables(report);
    return kExitOk;
}

int cmd_gen(const std::string& out_dir, std::size_t families,
            std::size_t per_family, std::size_t benign,
            const std::string& mode, std::uint64_t seed) {
    apksift::corpus_spec spec;
    spec.n_families = families;
    spec.samples_per_family = per_family;
    spec.n_benign = benign;
    if (mode == "rates") {
        spec.mode = apksift::permission_mode::rate_table;
    } else if (mode == "family") {
        spec.mode = apksift::permission_mode::family_pattern;
    } else {
        throw apksift::error(apksift::errc::bad_spec,
                             "--mode must be 'family' or 'rates'");
    }
    auto corpus = apksift::gen_synthetic_corpus(spec, seed);
    apksift::write_corpus_dir(corpus, out_dir);
    std::cout << "generated " << corpus.corpus.entries.size()
              << " profiles in " << out_dir << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"static Android package triage: feature extraction, "
                 "serial-blacklist + likelihood detection, family grouping"};
    app.require_subcommand(1);
    app.fallthrough();  // --workspace/--config/--seed may follow a subcommand

    common_options common;
    std::uint64_t seed = 0;
    app.add_option("--workspace", common.workspace_dir, "workspace directory");
    app.add_option("--config", common.config_path, "feature config file");
    app.add_option("--seed", seed, "RNG seed for seeded commands");

    auto* extract = app.add_subcommand("extract",
                                       "parse APKs or profile documents into "
                                       "the workspace");
    std::vector<std::string> inputs;
    std::string labels_file;
    extract->add_option("inputs", inputs, "APKs, profile documents, or dirs");
    extract->add_option("--labels", labels_file,
                        "labels index to import into the workspace");

    auto* train = app.add_subcommand("train", "fit the permission likelihood "
                                              "model from labeled profiles");

    auto* blacklist = app.add_subcommand("blacklist",
                                         "build the serial blacklist from "
                                         "labeled malicious profiles");

    auto* scan = app.add_subcommand("scan", "run detection over every "
                                            "workspace profile");
    double t_l = 1.0;
    bool no_short_circuit = false;
    unsigned workers = 0;
    scan->add_option("--threshold-TL", t_l, "likelihood ratio threshold");
    scan->add_flag("--no-short-circuit", no_short_circuit,
                   "evaluate all stages and list every firing reason");
    scan->add_option("--workers", workers, "detection worker threads");

    auto* classify = app.add_subcommand("classify",
                                        "group malicious verdicts into "
                                        "families");
    double t_s = 0.7;
    std::string weights_text = "0.333333333333333,0.333333333333333,"
                               "0.333333333333334";
    std::string order = "input";
    classify->add_option("--threshold-TS", t_s, "similarity threshold");
    classify->add_option("--weights", weights_text,
                         "w_api,w_cmd,w_perm (must sum to 1)");
    classify->add_option("--order", order, "sample order: input or sha256");

    auto* eval = app.add_subcommand("eval", "k-fold cross-validation over the "
                                            "labeled workspace corpus");
    std::size_t folds = 5;
    eval->add_option("--folds", folds, "fold count");
    eval->add_option("--threshold-TL", t_l, "likelihood ratio threshold");
    eval->add_option("--threshold-TS", t_s, "similarity threshold");
    eval->add_option("--weights", weights_text, "similarity weights");
    eval->add_flag("--no-short-circuit", no_short_circuit,
                   "evaluate all detection stages");

    auto* gen = app.add_subcommand("gen", "generate a synthetic labeled "
                                          "corpus");
    std::string out_dir;
    std::size_t families = 5;
    std::size_t per_family = 40;
    std::size_t benign = 400;
    std::string mode = "family";
    gen->add_option("--out", out_dir, "output directory")->required();
    gen->add_option("--families", families, "malware family count");
    gen->add_option("--per-family", per_family, "samples per family");
    gen->add_option("--benign", benign, "benign sample count");
    gen->add_option("--mode", mode, "permission mode: family or rates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        auto need_workspace = [&common]() {
            if (common.workspace_dir.empty()) {
                throw apksift::error(apksift::errc::missing_artifact,
                                     "--workspace is required");
            }
        };
        if (extract->parsed()) {
            need_workspace();
            return cmd_extract(common, inputs, labels_file);
        }
        if (train->parsed()) {
            need_workspace();
            return cmd_train(common);
        }
        if (blacklist->parsed()) {
            need_workspace();
            return cmd_blacklist(common);
        }
        if (scan->parsed()) {
            need_workspace();
            return cmd_scan(common, t_l, no_short_circuit, workers);
        }
        if (classify->parsed()) {
            need_workspace();
            return cmd_classify(common, t_s, weights_text, order);
        }
        if (eval->parsed()) {
            need_workspace();
            return cmd_eval(common, folds, seed, t_l, t_s, weights_text,
                            no_short_circuit);
        }
        if (gen->parsed()) {
            return cmd_gen(out_dir, families, per_family, benign, mode, seed);
        }
    } catch (const apksift::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
