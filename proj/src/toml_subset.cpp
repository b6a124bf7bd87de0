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

#include "mleak/toml_subset.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "mleak/errors.hpp"

namespace mleak {
namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::kConfigParseError, "line " + std::to_string(line) + ": " + what);
}

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  TomlDocument run() {
    TomlDocument doc;
    std::string table;
    doc[table].line = 0;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        const int header_line = line_;
        ++pos_;
        skip_spaces();
        table = read_key();
        skip_spaces();
        if (peek() != ']') fail(line_, "expected ']' after table name '" + table + "'");
        ++pos_;
        finish_line();
        if (doc.count(table) && doc[table].line != 0) {
          fail(header_line, "table [" + table + "] defined twice");
        }
        doc[table].line = header_line;
        continue;
      }
      const int key_line = line_;
      const std::string key = read_key();
      skip_spaces();
      if (peek() != '=') fail(line_, "expected '=' after key '" + key + "'");
      ++pos_;
      skip_spaces();
      TomlValue value = read_value();
      value.line = key_line;
      finish_line();
      auto& values = doc[table].values;
      if (values.count(key)) {
        fail(key_line, "duplicate key '" + key + "'" +
                           (table.empty() ? "" : " in [" + table + "]"));
      }
      values.emplace(key, std::move(value));
    }
    return doc;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }

  void skip_newline() {
    if (peek() == '\r') ++pos_;
    if (peek() == '\n') {
      ++pos_;
      ++line_;
    }
  }

  void skip_blank_lines() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        skip_newline();
      } else {
        return;
      }
    }
  }

  // Whitespace, comments and newlines inside arrays.
  void skip_array_space() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        skip_newline();
      } else {
        return;
      }
    }
  }

  void finish_line() {
    skip_spaces();
    skip_comment();
    if (at_end()) return;
    if (peek() != '\n' && peek() != '\r') {
      fail(line_, std::string("unexpected '") + peek() + "' after value");
    }
    skip_newline();
  }

  std::string read_key() {
    if (peek() == '"') return read_string();
    const std::size_t start = pos_;
    while (!at_end() && is_bare_key_char(peek())) ++pos_;
    if (pos_ == start) {
      fail(line_, at_end() ? std::string("expected a key")
                           : std::string("unexpected '") + peek() + "' where a key was expected");
    }
    if (peek() == '.') fail(line_, "dotted keys are not supported");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string read_string() {
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail(line_, "unterminated string");
      const char c = text_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (at_end()) fail(line_, "unterminated escape");
      const char e = text_[pos_++];
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default: fail(line_, std::string("unsupported escape '\\") + e + "'");
      }
    }
    return out;
  }

  TomlValue read_value() {
    TomlValue v;
    v.line = line_;
    const char c = peek();
    if (c == '"') {
      v.kind = TomlValue::Kind::kString;
      v.string = read_string();
      return v;
    }
    if (c == '\'') fail(line_, "literal strings are not supported; use \"...\"");
    if (c == '{') fail(line_, "inline tables are not supported");
    if (c == '[') {
      ++pos_;
      v.kind = TomlValue::Kind::kArray;
      skip_array_space();
      while (peek() != ']') {
        if (at_end()) fail(v.line, "unterminated array");
        v.array.push_back(read_value());
        skip_array_space();
        if (peek() == ',') {
          ++pos_;
          skip_array_space();
        } else if (peek() != ']') {
          fail(line_, "expected ',' or ']' in array");
        }
      }
      ++pos_;
      return v;
    }
    const std::size_t start = pos_;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) &&
           peek() != ',' && peek() != ']' && peek() != '#') {
      ++pos_;
    }
    const std::string token(text_.substr(start, pos_ - start));
    if (token.empty()) fail(line_, "missing value");
    if (token == "true" || token == "false") {
      v.kind = TomlValue::Kind::kBool;
      v.boolean = token == "true";
      return v;
    }
    std::string digits;
    for (char ch : token) {
      if (ch != '_') digits.push_back(ch);
    }
    const std::string_view body =
        (digits[0] == '+' || digits[0] == '-') ? std::string_view(digits).substr(1)
                                               : std::string_view(digits);
    const double sign = digits[0] == '-' ? -1.0 : 1.0;
    if (body == "inf" || body == "nan") {
      v.kind = TomlValue::Kind::kFloat;
      v.floating = body == "inf" ? sign * std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::quiet_NaN();
      return v;
    }
    const bool is_float = digits.find_first_of(".eE") != std::string::npos;
    const char* first = digits.data() + (digits[0] == '+' ? 1 : 0);
    const char* last = digits.data() + digits.size();
    std::from_chars_result res{};
    if (is_float) {
      v.kind = TomlValue::Kind::kFloat;
      res = std::from_chars(first, last, v.floating);
    } else {
      v.kind = TomlValue::Kind::kInteger;
      res = std::from_chars(first, last, v.integer);
    }
    if (res.ec != std::errc() || res.ptr != last) {
      fail(line_, "cannot parse value '" + token + "'");
    }
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

std::string_view TomlKindName(TomlValue::Kind kind) {
  switch (kind) {
    case TomlValue::Kind::kInteger: return "integer";
    case TomlValue::Kind::kFloat: return "float";
    case TomlValue::Kind::kBool: return "boolean";
    case TomlValue::Kind::kString: return "string";
    case TomlValue::Kind::kArray: return "array";
  }
  return "?";
}

TomlDocument parse_toml(std::string_view text) { return Parser(text).run(); }

}  // namespace mleak
