/*
 * Copyright 2026 The QASE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qase {

// Parses JSON text; syntax errors become ParseError with 1-based line and
// column. `source` names the input in messages.
nlohmann::json parse_json_text(std::string_view text, const std::string& source);

nlohmann::json read_json_file(const std::filesystem::path& path);

// Writes pretty-printed JSON through a temporary file and rename, so readers
// never observe a partial document.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Strict reader for one JSON object. Call finish() after consuming fields;
// any key not consumed is reported as an unknown field.
class FieldReader {
 public:
  FieldReader(const nlohmann::json& j, std::string where);

  bool has(std::string_view key) const;
  const nlohmann::json& required(std::string_view key);
  const nlohmann::json* optional(std::string_view key);

  std::string string(std::string_view key);
  std::optional<std::string> optional_string(std::string_view key);
  double number(std::string_view key);
  std::optional<double> optional_number(std::string_view key);
  bool boolean(std::string_view key);
  std::vector<std::string> string_list(std::string_view key);

  void finish() const;

  std::string field(std::string_view key) const;

 private:
  const nlohmann::json& j_;
  std::string where_;
  std::set<std::string, std::less<>> used_;
};

}  // namespace qase
