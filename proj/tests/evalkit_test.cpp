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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "apksift/error.hpp"
#include "apksift/evalkit.hpp"
#include "apksift/ingest.hpp"

using namespace apksift;

TEST_CASE("k-fold split shapes and determinism") {
    SUBCASE("10 entries over 5 folds gives five folds of two") {
        auto folds = kfold_split(10, 5, 0);
        REQUIRE(folds.size() == 5);
        for (const auto& f : folds) CHECK(f.size() == 2);
    }
    SUBCASE("11 entries over 5 folds gives one fold of three") {
        auto folds = kfold_split(11, 5, 0);
        std::multiset<std::size_t> sizes;
        for (const auto& f : folds) sizes.insert(f.size());
        CHECK(sizes == std::multiset<std::size_t>{2, 2, 2, 2, 3});
    }
    SUBCASE("folds partition the index range") {
        auto folds = kfold_split(23, 4, 99);
        std::set<std::size_t> seen;
        for (const auto& f : folds) {
            for (std::size_t idx : f) {
                CHECK(idx < 23);
                CHECK(seen.insert(idx).second);  // no duplicates
            }
        }
        CHECK(seen.size() == 23);
    }
    SUBCASE("the same seed reproduces the same folds") {
        CHECK(kfold_split(40, 5, 7) == kfold_split(40, 5, 7));
        CHECK(kfold_split(40, 5, 7) != kfold_split(40, 5, 8));
    }
    SUBCASE("a corpus smaller than k is rejected") {
        try {
            kfold_split(3, 5, 0);
            FAIL("expected an error");
        } catch (const error& e) {
            CHECK(e.code() == errc::corpus_too_small);
        }
        CHECK_THROWS_AS(kfold_split(10, 1, 0), error);
    }
}

TEST_CASE("generator shapes follow the spec") {
    SUBCASE("no benign entries when n_benign is zero") {
        corpus_spec spec;
        spec.n_families = 2;
        spec.samples_per_family = 3;
        spec.n_benign = 0;
        auto out = gen_synthetic_corpus(spec, 1);
        CHECK(out.corpus.entries.size() == 6);
        for (const auto& e : out.corpus.entries) {
            CHECK(e.label.malicious);
        }
    }
    SUBCASE("an empty spec is rejected") {
        corpus_spec spec;
        spec.n_families = 0;
        spec.samples_per_family = 0;
        spec.n_benign = 0;
        try {
            gen_synthetic_corpus(spec, 1);
            FAIL("expected an error");
        } catch (const error& e) {
            CHECK(e.code() == errc::bad_spec);
        }
    }
    SUBCASE("the same seed is byte-identical, another seed is not") {
        corpus_spec spec;
        spec.n_families = 2;
        spec.samples_per_family = 4;
        spec.n_benign = 10;
        auto a = gen_synthetic_corpus(spec, 42);
        auto b = gen_synthetic_corpus(spec, 42);
        auto c = gen_synthetic_corpus(spec, 43);
        REQUIRE(a.corpus.entries.size() == b.corpus.entries.size());
        for (std::size_t i = 0; i < a.corpus.entries.size(); ++i) {
            CHECK(profile_to_json(a.corpus.entries[i].raw) ==
                  profile_to_json(b.corpus.entries[i].raw));
        }
        bool any_difference = false;
        for (std::size_t i = 0; i < a.corpus.entries.size(); ++i) {
            if (profile_to_json(a.corpus.entries[i].raw) !=
                profile_to_json(c.corpus.entries[i].raw)) {
                any_difference = true;
            }
        }
        CHECK(any_difference);
    }
    SUBCASE("the manifest records the per-family ground truth") {
        corpus_spec spec;
        spec.n_families = 3;
        spec.samples_per_family = 2;
        spec.n_benign = 4;
        auto out = gen_synthetic_corpus(spec, 5);
        REQUIRE(out.manifest.families.size() == 3);
        for (const auto& fam : out.manifest.families) {
            CHECK(fam.apis.size() == 3);
            CHECK(fam.commands.size() == 2);
            CHECK(!fam.serials.empty());
        }
        // every malicious sample's serial is accounted for in the manifest
        std::set<std::string> known;
        for (const auto& fam : out.manifest.families) {
            known.insert(fam.serials.begin(), fam.serials.end());
        }
        known.insert(out.manifest.shared_serials.begin(),
                     out.manifest.shared_serials.end());
        for (const auto& e : out.corpus.entries) {
            if (!e.label.malicious) continue;
            for (const auto& s : e.raw.cert_serials) {
                CHECK(known.count(s.display()) == 1);
            }
        }
    }
}

TEST_CASE("rate_table mode reproduces the reference request rates") {
    corpus_spec spec;
    spec.n_families = 5;
    spec.samples_per_family = 40;  // 200 malicious
    spec.n_benign = 400;
    spec.mode = permission_mode::rate_table;
    auto out = gen_synthetic_corpus(spec, 7);
    feature_config cfg = default_config();

    // independent recount straight from the raw documents
    std::size_t n_ben = 0;
    std::size_t n_mal = 0;
    std::vector<std::size_t> ben_count(26, 0), mal_count(26, 0);
    for (const auto& e : out.corpus.entries) {
        auto& counts = e.label.malicious ? mal_count : ben_count;
        ++(e.label.malicious ? n_mal : n_ben);
        for (std::size_t j = 0; j < 26; ++j) {
            if (e.raw.manifest.requested_permissions.count(
                    cfg.critical_permissions[j])) {
                ++counts[j];
            }
        }
    }
    REQUIRE(n_ben == 400);
    REQUIRE(n_mal == 200);

    auto rates = permission_rate_table();
    REQUIRE(rates.size() == 26);
    for (std::size_t j = 0; j < 26; ++j) {
        CHECK(rates[j].name == cfg.critical_permissions[j]);
        double ben_rate = 100.0 * static_cast<double>(ben_count[j]) /
                          static_cast<double>(n_ben);
        double mal_rate = 100.0 * static_cast<double>(mal_count[j]) /
                          static_cast<double>(n_mal);
        CHECK(std::abs(ben_rate - rates[j].requested_benign) <= 0.5);
        CHECK(std::abs(mal_rate - rates[j].requested_malware) <= 0.5);
    }
}

TEST_CASE("cross-validation on the separable corpus is perfect") {
    corpus_spec spec;
    spec.n_families = 4;
    spec.samples_per_family = 10;
    spec.n_benign = 60;
    auto out = gen_synthetic_corpus(spec, 11);
    feature_config cfg = default_config();

    eval_params params;
    cv_report report = run_cv(out.corpus, cfg, params, 5, 3);

    REQUIRE(report.folds.size() == 5);
    for (const auto& fold : report.folds) {
        CHECK(fold.confusion.fp == 0);
        CHECK(fold.confusion.fn == 0);
    }
    CHECK(report.mean_detection_accuracy == doctest::Approx(1.0));
    CHECK(report.combined.tp == 40);
    CHECK(report.combined.tn == 60);

    // marginals reconcile with the corpus label counts
    std::uint64_t actual_malicious = 0;
    std::uint64_t actual_benign = 0;
    for (const auto& e : out.corpus.entries) {
        ++(e.label.malicious ? actual_malicious : actual_benign);
    }
    CHECK(report.combined.tp + report.combined.fn == actual_malicious);
    CHECK(report.combined.fp + report.combined.tn == actual_benign);

    // separable families classify perfectly too
    for (const auto& fam : out.manifest.families) {
        CHECK(report.per_family.at(fam.name).accuracy == doctest::Approx(1.0));
    }
    CHECK(report.overall_classification_accuracy == doctest::Approx(1.0));
}

TEST_CASE("single-category corpora degenerate") {
    corpus_spec spec;
    spec.n_families = 2;
    spec.samples_per_family = 5;
    spec.n_benign = 0;
    auto out = gen_synthetic_corpus(spec, 13);
    feature_config cfg = default_config();
    eval_params params;
    try {
        run_cv(out.corpus, cfg, params, 5, 0);
        FAIL("expected an error");
    } catch (const error& e) {
        CHECK(e.code() == errc::fold_degenerate);
    }
}

TEST_CASE("short-circuit mode cannot change CV decisions") {
    corpus_spec spec;
    spec.n_families = 3;
    spec.samples_per_family = 8;
    spec.n_benign = 40;
    auto out = gen_synthetic_corpus(spec, 17);
    feature_config cfg = default_config();

    eval_params fast;
    fast.detector.short_circuit = true;
    eval_params full;
    full.detector.short_circuit = false;

    cv_report a = run_cv(out.corpus, cfg, fast, 4, 9);
    cv_report b = run_cv(out.corpus, cfg, full, 4, 9);
    REQUIRE(a.folds.size() == b.folds.size());
    for (std::size_t f = 0; f < a.folds.size(); ++f) {
        CHECK(a.folds[f].confusion.tp == b.folds[f].confusion.tp);
        CHECK(a.folds[f].confusion.fn == b.folds[f].confusion.fn);
        CHECK(a.folds[f].confusion.fp == b.folds[f].confusion.fp);
        CHECK(a.folds[f].confusion.tn == b.folds[f].confusion.tn);
    }
}

TEST_CASE("run_cv honours precomputed folds") {
    corpus_spec spec;
    spec.n_families = 2;
    spec.samples_per_family = 6;
    spec.n_benign = 12;
    auto out = gen_synthetic_corpus(spec, 19);
    out.corpus.folds = kfold_split(out.corpus.entries.size(), 3, 5);

    feature_config cfg = default_config();
    eval_params params;
    cv_report report = run_cv(out.corpus, cfg, params, 3, 5);
    CHECK(report.folds.size() == 3);
    CHECK(report.combined.total() == out.corpus.entries.size());
}

TEST_CASE("cv report JSON carries the confusion matrix and families") {
    corpus_spec spec;
    spec.n_families = 2;
    spec.samples_per_family = 6;
    spec.n_benign = 20;
    auto out = gen_synthetic_corpus(spec, 23);
    feature_config cfg = default_config();
    eval_params params;
    cv_report report = run_cv(out.corpus, cfg, params, 4, 1);

    std::string text = cv_report_to_json(report);
    CHECK(text.find("\"tp\"") != std::string::npos);
    CHECK(text.find("family_00") != std::string::npos);
    CHECK(text.find("mean_detection_accuracy") != std::string::npos);
}

TEST_CASE("confusion matrix helpers") {
    confusion_matrix m{10, 2, 3, 85};
    CHECK(m.total() == 100);
    CHECK(m.accuracy() == doctest::Approx(0.95));
    confusion_matrix sum;
    sum += m;
    sum += m;
    CHECK(sum.tp == 20);
    CHECK(sum.total() == 200);
    CHECK(confusion_matrix{}.accuracy() == 0.0);
}
