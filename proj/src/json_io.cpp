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

#include "qase/json_io.hpp"

#include <fstream>
#include <sstream>

#include "qase/error.hpp"

namespace qase {

using nlohmann::json;

json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is the 1-based offset of the offending byte (past end for EOF).
    const std::size_t offset = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string detail = e.what();
    if (const auto pos = detail.find("syntax error"); pos != std::string::npos) detail = detail.substr(pos);
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + detail,
                     line, column);
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("short write to " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

json read_json_file(const std::filesystem::path& path) {
  return parse_json_text(read_text_file(path), path.string());
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

FieldReader::FieldReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
  if (!j_.is_object()) throw SchemaError(where_ + ": expected an object");
}

std::string FieldReader::field(std::string_view key) const {
  return where_.empty() ? std::string(key) : where_ + "." + std::string(key);
}

bool FieldReader::has(std::string_view key) const { return j_.contains(key); }

const json& FieldReader::required(std::string_view key) {
  const auto it = j_.find(key);
  if (it == j_.end()) throw SchemaError("missing field \"" + field(key) + "\"");
  used_.emplace(key);
  return *it;
}

const json* FieldReader::optional(std::string_view key) {
  const auto it = j_.find(key);
  if (it == j_.end() || it->is_null()) {
    if (it != j_.end()) used_.emplace(key);
    return nullptr;
  }
  used_.emplace(key);
  return &*it;
}

std::string FieldReader::string(std::string_view key) {
  const json& v = required(key);
  if (!v.is_string()) throw SchemaError(field(key) + ": expected a string");
  return v.get<std::string>();
}

std::optional<std::string> FieldReader::optional_string(std::string_view key) {
  const json* v = optional(key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_string()) throw SchemaError(field(key) + ": expected a string");
  return v->get<std::string>();
}

double FieldReader::number(std::string_view key) {
  const json& v = required(key);
  if (!v.is_number()) throw SchemaError(field(key) + ": expected a number");
  return v.get<double>();
}

std::optional<double> FieldReader::optional_number(std::string_view key) {
  const json* v = optional(key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_number()) throw SchemaError(field(key) + ": expected a number");
  return v->get<double>();
}

bool FieldReader::boolean(std::string_view key) {
  const json& v = required(key);
  if (!v.is_boolean()) throw SchemaError(field(key) + ": expected a boolean");
  return v.get<bool>();
}

std::vector<std::string> FieldReader::string_list(std::string_view key) {
  const json& v = required(key);
  if (!v.is_array()) throw SchemaError(field(key) + ": expected an array");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) throw SchemaError(field(key) + ": expected an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

void FieldReader::finish() const {
  for (const auto& [key, value] : j_.items()) {
    if (!used_.contains(key)) throw SchemaError("unknown field \"" + field(key) + "\"");
  }
}

}  // namespace qase
