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

#include "qase/protocol.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "qase/error.hpp"

namespace qase {

using nlohmann::json;

namespace {

json parse_line(std::string_view line, const char* what) {
  try {
    return json::parse(line.begin(), line.end());
  } catch (const json::parse_error&) {
    const std::string excerpt(line.substr(0, 80));
    throw ProtocolError(std::string("malformed ") + what + " line: " + excerpt);
  }
}

}  // namespace

bool Evidence::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string handshake_line() { return json{{"protocol", kProtocolVersion}}.dump(); }
std::string shutdown_line() { return json{{"cmd", "shutdown"}}.dump(); }

void check_handshake(std::string_view line) {
  json j;
  try {
    j = json::parse(line.begin(), line.end());
  } catch (const json::parse_error&) {
    throw ProtocolError("expected handshake, got: " + std::string(line.substr(0, 80)));
  }
  if (!j.is_object() || !j.contains("protocol") || !j["protocol"].is_string()) {
    throw ProtocolError("expected handshake, got: " + std::string(line.substr(0, 80)));
  }
  const std::string version = j["protocol"].get<std::string>();
  if (version != kProtocolVersion) {
    throw ProtocolError("unsupported protocol version " + version + ", expected " + std::string(kProtocolVersion));
  }
}

std::string encode_request(const InferenceRequest& r) {
  json j;
  j["request_id"] = r.request_id;
  if (r.inline_input) {
    j["input"] = *r.inline_input;
  } else {
    j["input_path"] = r.input_path;
  }
  j["want_evidence"] = r.want_evidence;
  return j.dump();
}

InferenceRequest decode_request(std::string_view line) {
  const json j = parse_line(line, "request");
  if (!j.is_object() || !j.contains("request_id") || !j["request_id"].is_string()) {
    throw ProtocolError("request without request_id");
  }
  InferenceRequest r;
  r.request_id = j["request_id"].get<std::string>();
  if (j.contains("input_path") && j["input_path"].is_string()) r.input_path = j["input_path"].get<std::string>();
  if (j.contains("input") && j["input"].is_string()) r.inline_input = j["input"].get<std::string>();
  if (j.contains("want_evidence") && j["want_evidence"].is_boolean()) r.want_evidence = j["want_evidence"].get<bool>();
  return r;
}

std::string encode_response(const InferenceResponse& r) {
  json j;
  j["request_id"] = r.request_id;
  if (r.label) j["label"] = *r.label;
  if (r.error) j["error"] = *r.error;
  if (r.evidence) {
    json values = json::array();
    for (double v : r.evidence->values) values.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    j["evidence"] = {{"height", r.evidence->height}, {"width", r.evidence->width}, {"values", std::move(values)}};
  }
  return j.dump();
}

InferenceResponse decode_response(std::string_view line) {
  const json j = parse_line(line, "response");
  if (!j.is_object() || !j.contains("request_id") || !j["request_id"].is_string()) {
    throw ProtocolError("response without request_id: " + std::string(line.substr(0, 80)));
  }
  InferenceResponse r;
  r.request_id = j["request_id"].get<std::string>();
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw ProtocolError("response label must be a string");
    r.label = j["label"].get<std::string>();
  }
  if (j.contains("error")) {
    if (!j["error"].is_string()) throw ProtocolError("response error must be a string");
    r.error = j["error"].get<std::string>();
  }
  if (r.label.has_value() == r.error.has_value()) {
    throw ProtocolError("response " + r.request_id + " must carry exactly one of label and error");
  }
  if (j.contains("evidence") && !j["evidence"].is_null()) {
    const json& e = j["evidence"];
    if (!e.is_object() || !e.contains("height") || !e.contains("width") || !e.contains("values") ||
        !e["height"].is_number_integer() || !e["width"].is_number_integer() || !e["values"].is_array()) {
      throw ProtocolError("response " + r.request_id + ": evidence needs integer height, width and a values array");
    }
    Evidence ev;
    ev.height = e["height"].get<int>();
    ev.width = e["width"].get<int>();
    ev.values.reserve(e["values"].size());
    for (const auto& v : e["values"]) {
      if (v.is_number()) {
        ev.values.push_back(v.get<double>());
      } else if (v.is_null()) {
        ev.values.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        throw ProtocolError("response " + r.request_id + ": evidence values must be numbers");
      }
    }
    r.evidence = std::move(ev);
  }
  return r;
}

}  // namespace qase
