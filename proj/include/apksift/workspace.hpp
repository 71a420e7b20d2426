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

#ifndef APKSIFT_WORKSPACE_HPP
#define APKSIFT_WORKSPACE_HPP

#include <filesystem>
#include <map>
#include <string>

#include "apksift/evalkit.hpp"
#include "apksift/features.hpp"

namespace apksift {

/// On-disk layout of one analysis workspace. Artifacts are plain files so
/// every stage's output is diffable; a lock token serializes writers.
class workspace {
public:
    explicit workspace(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path config_path() const { return root_ / "config.json"; }
    std::filesystem::path model_path() const { return root_ / "model.json"; }
    std::filesystem::path blacklist_path() const {
        return root_ / "blacklist.txt";
    }
    std::filesystem::path profiles_dir() const { return root_ / "profiles"; }
    std::filesystem::path labels_path() const { return root_ / "labels.tsv"; }
    std::filesystem::path verdicts_path() const {
        return root_ / "verdicts.jsonl";
    }
    std::filesystem::path groups_path() const { return root_ / "groups.json"; }
    std::filesystem::path cv_report_path() const {
        return root_ / "cv_report.json";
    }
    std::filesystem::path lock_path() const { return root_ / ".lock"; }

    /// Loads the workspace config, a config override path, or the built-in
    /// default, in that priority order.
    feature_config load_config(const std::filesystem::path& override_path) const;

private:
    std::filesystem::path root_;
};

/// Writer lock token (O_EXCL create). Throws errc::workspace_locked when
/// another writer holds it; removed on destruction.
class workspace_lock {
public:
    explicit workspace_lock(const workspace& ws);
    ~workspace_lock();

    workspace_lock(const workspace_lock&) = delete;
    workspace_lock& operator=(const workspace_lock&) = delete;

private:
    std::filesystem::path path_;
};

/// Whole-file helpers. atomic_write goes through a temp file plus rename so
/// a refused or failed command never leaves a partial artifact.
std::string read_file(const std::filesystem::path& path);
std::string read_artifact(const std::filesystem::path& path);  // missing_artifact
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Labels index: "<sha256>\t<benign|malicious:FAMILY>" per line.
std::map<std::string, label_info> load_labels(const std::filesystem::path& path);
std::string labels_to_text(const labeled_corpus& corpus);
std::string label_to_string(const label_info& label);

/// Writes a generated corpus as a directory of Profile File Format
/// documents plus labels.tsv and manifest.json.
void write_corpus_dir(const synthetic_corpus& corpus,
                      const std::filesystem::path& dir);

} // namespace apksift

#endif
