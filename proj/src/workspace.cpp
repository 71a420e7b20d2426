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

#include "apksift/workspace.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

#include "apksift/error.hpp"
#include "apksift/ingest.hpp"

namespace apksift {

namespace fs = std::filesystem;

workspace::workspace(std::filesystem::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
    fs::create_directories(profiles_dir());
}

feature_config workspace::load_config(
    const std::filesystem::path& override_path) const {
    if (!override_path.empty()) {
        return load_feature_config(read_artifact(override_path));
    }
    if (fs::exists(config_path())) {
        return load_feature_config(read_file(config_path()));
    }
    return default_config();
}

workspace_lock::workspace_lock(const workspace& ws) : path_(ws.lock_path()) {
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        throw error(errc::workspace_locked,
                    path_.string() +
                        " exists; another writer is active (or remove a "
                        "stale lock by hand)");
    }
    std::string token = std::to_string(::getpid()) + "\n";
    ssize_t n = ::write(fd, token.data(), token.size());
    (void)n;
    ::close(fd);
}

workspace_lock::~workspace_lock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw error(errc::io_error, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string read_artifact(const std::filesystem::path& path) {
    if (!fs::exists(path)) {
        throw error(errc::missing_artifact, path.string());
    }
    return read_file(path);
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw error(errc::io_error, "cannot write " + tmp.string());
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw error(errc::io_error, "short write to " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

std::string label_to_string(const label_info& label) {
    return label.malicious ? "malicious:" + label.family : "benign";
}

std::map<std::string, label_info> load_labels(
    const std::filesystem::path& path) {
    std::map<std::string, label_info> out;
    std::istringstream in(read_artifact(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw error(errc::schema_violation,
                        "labels line " + std::to_string(line_no) +
                            ": expected <sha256>\\t<label>");
        }
        std::string sha = line.substr(0, tab);
        std::string label = line.substr(tab + 1);
        if (label == "benign") {
            out[sha] = {false, ""};
        } else if (label.rfind("malicious:", 0) == 0) {
            std::string family = label.substr(10);
            if (family.empty()) {
                throw error(errc::schema_violation,
                            "labels line " + std::to_string(line_no) +
                                ": malicious label without a family");
            }
            out[sha] = {true, family};
        } else {
            throw error(errc::schema_violation,
                        "labels line " + std::to_string(line_no) +
                            ": unknown label '" + label + "'");
        }
    }
    return out;
}

std::string labels_to_text(const labeled_corpus& corpus) {
    std::ostringstream out;
    for (const auto& e : corpus.entries) {
        out << e.raw.sha256 << "\t" << label_to_string(e.label) << "\n";
    }
    return out.str();
}

void write_corpus_dir(const synthetic_corpus& corpus,
                      const std::filesystem::path& dir) {
    fs::create_directories(dir / "profiles");
    for (const auto& e : corpus.corpus.entries) {
        atomic_write(dir / "profiles" / (e.raw.sha256 + ".json"),
                     profile_to_json(e.raw));
    }
    atomic_write(dir / "labels.tsv", labels_to_text(corpus.corpus));
    atomic_write(dir / "manifest.json",
                 synthetic_manifest_to_json(corpus.manifest));
}

} // namespace apksift
