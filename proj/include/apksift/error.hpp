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

#ifndef APKSIFT_ERROR_HPP
#define APKSIFT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace apksift {

enum class errc {
    // ingest
    not_an_archive,
    no_certificate,
    manifest_missing,
    manifest_malformed,
    dex_malformed,
    schema_violation,
    // features
    config_invalid,
    // likelihood
    empty_category,
    config_mismatch,
    dimension_mismatch,
    // blacklist
    unlabeled_sample,
    empty_corpus,
    // classifier
    bad_weights,
    missing_label,
    // evalkit
    corpus_too_small,
    fold_degenerate,
    bad_spec,
    // cli / workspace
    missing_artifact,
    version_mismatch,
    workspace_locked,
    io_error,
};

std::string_view errc_name(errc code);

/// Error thrown by all pipeline operations. `what()` carries the context
/// (archive entry, byte offset, field path) the spec requires per error.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace apksift

#endif
