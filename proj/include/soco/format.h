// Copyright 2026 The SoCo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOCO_FORMAT_H_
#define SOCO_FORMAT_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

namespace soco {

// Fixed 17-significant-digit rendering ("%.17g"); round-trips every double.
std::string format_double(double value);

// Writes JSON with two-space indentation, keys in sorted order and every
// floating point number rendered through format_double.
void write_json(std::ostream& os, const nlohmann::json& value);
std::string to_json_string(const nlohmann::json& value);

// FNV-1a, used to fingerprint suite manifests.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

}  // namespace soco

#endif  // SOCO_FORMAT_H_
