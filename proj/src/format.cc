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

#include "soco/format.h"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace soco {

namespace {

void write_indent(std::ostream& os, int depth) {
  for (int i = 0; i < depth; ++i) os << "  ";
}

void write_value(std::ostream& os, const nlohmann::json& v, int depth) {
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        write_indent(os, depth + 1);
        os << nlohmann::json(it.key()).dump() << ": ";
        write_value(os, it.value(), depth + 1);
      }
      os << '\n';
      write_indent(os, depth);
      os << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) os << ",\n";
        write_indent(os, depth + 1);
        write_value(os, v[i], depth + 1);
      }
      os << '\n';
      write_indent(os, depth);
      os << ']';
      return;
    }
    case nlohmann::json::value_t::number_float:
      os << format_double(v.get<double>());
      return;
    default:
      os << v.dump();
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_json(std::ostream& os, const nlohmann::json& value) {
  write_value(os, value, 0);
  os << '\n';
}

std::string to_json_string(const nlohmann::json& value) {
  std::ostringstream os;
  write_json(os, value);
  return os.str();
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace soco
