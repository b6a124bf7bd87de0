// Copyright 2026 The mleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mleak {

/// A value from the supported TOML subset: integers, floats (including
/// inf/nan), booleans, basic strings, and arrays of those.
struct TomlValue {
  enum class Kind { kInteger, kFloat, kBool, kString, kArray };

  Kind kind = Kind::kInteger;
  std::int64_t integer = 0;
  double floating = 0.0;
  bool boolean = false;
  std::string string;
  std::vector<TomlValue> array;
  int line = 0;

  bool is_number() const { return kind == Kind::kInteger || kind == Kind::kFloat; }
  double as_double() const { return kind == Kind::kInteger ? double(integer) : floating; }
};

std::string_view TomlKindName(TomlValue::Kind kind);

struct TomlTable {
  std::map<std::string, TomlValue> values;
  int line = 0;
};

/// Tables by name; keys outside any table live under "".
using TomlDocument = std::map<std::string, TomlTable>;

/// Parses [table] headers, `key = value` pairs, comments and (possibly
/// multi-line) arrays. Dotted keys, inline tables, literal strings and dates
/// are rejected. Errors raise ConfigParseError with "line N: ...".
TomlDocument parse_toml(std::string_view text);

}  // namespace mleak
