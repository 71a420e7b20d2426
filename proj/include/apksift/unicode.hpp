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

#ifndef APKSIFT_UNICODE_HPP
#define APKSIFT_UNICODE_HPP

#include <string>

namespace apksift {

/// Strict UTF-8 decode; invalid sequences become U+FFFD.
std::u32string utf8_decode(const std::string& text);

std::string utf8_encode(const std::u32string& text);
std::string utf8_encode(char32_t scalar);

} // namespace apksift

#endif
