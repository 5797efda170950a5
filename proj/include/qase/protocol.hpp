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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qase {

// Newline-delimited JSON over the adapter's stdin/stdout.
//
//   adapter -> harness  {"protocol":"qase-adapter/1"}            (first line)
//   harness -> adapter  {"request_id":"r1","input_path":"/x.ppm","want_evidence":true}
//   adapter -> harness  {"request_id":"r1","label":"rose",
//                        "evidence":{"height":H,"width":W,"values":[...]}}
//                   or  {"request_id":"r1","error":"message"}
//   harness -> adapter  {"cmd":"shutdown"}
inline constexpr std::string_view kProtocolVersion = "qase-adapter/1";

// Row-major attribution map. Non-finite values travel as JSON null.
struct Evidence {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  bool shape_consistent() const {
    return height > 0 && width > 0 && values.size() == static_cast<std::size_t>(height) * width;
  }
  bool all_finite() const;
};

struct InferenceRequest {
  std::string request_id;
  std::string input_path;
  std::optional<std::string> inline_input;  // sent as "input" instead of a path
  bool want_evidence = false;
};

struct InferenceResponse {
  std::string request_id;
  std::optional<std::string> label;
  std::optional<Evidence> evidence;
  std::optional<std::string> error;
};

std::string handshake_line();
std::string shutdown_line();
// Throws ProtocolError unless `line` is the handshake for kProtocolVersion.
void check_handshake(std::string_view line);

std::string encode_request(const InferenceRequest& request);
InferenceRequest decode_request(std::string_view line);
std::string encode_response(const InferenceResponse& response);
// Throws ProtocolError for malformed JSON, a missing request_id, or a
// response carrying both or neither of label and error.
InferenceResponse decode_response(std::string_view line);

}  // namespace qase
