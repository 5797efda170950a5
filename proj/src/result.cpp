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

#include "qase/result.hpp"

#include "qase/error.hpp"
#include "qase/json_io.hpp"

namespace qase {

using nlohmann::json;

std::string_view to_string(CaseStatus s) {
  switch (s) {
    case CaseStatus::kPassed: return "PASS";
    case CaseStatus::kFailed: return "FAIL";
    case CaseStatus::kErrored: return "ERROR";
  }
  return "ERROR";
}

CaseStatus TestResult::status() const {
  if (error) return CaseStatus::kErrored;
  bool failed = false;
  for (const auto& v : verdicts) {
    if (v.status == VerdictStatus::kError) return CaseStatus::kErrored;
    if (v.status == VerdictStatus::kFail) failed = true;
  }
  return failed ? CaseStatus::kFailed : CaseStatus::kPassed;
}

std::vector<std::string> TestResult::evidence_refs() const {
  std::vector<std::string> ids;
  for (const auto& [path, id] : evidence) ids.push_back(id);
  return ids;
}

json metric_to_json(const MetricValue& v) {
  if (v.is_bool()) return v.as_bool();
  if (v.exact && v.exact->den() == 1) return v.exact->num();
  return v.as_double();
}

MetricValue metric_from_json(const json& value, const json& exact) {
  if (value.is_boolean()) return MetricValue::boolean(value.get<bool>());
  if (!value.is_number()) throw SchemaError("metric value must be a number or boolean");
  MetricValue m = MetricValue::number(value.get<double>());
  if (exact.is_array() && exact.size() == 2) {
    m.exact = Rational(exact[0].get<std::int64_t>(), exact[1].get<std::int64_t>());
  }
  return m;
}

json to_json(const Verdict& v) {
  json j;
  j["condition"] = serialize_condition(v.condition);
  j["status"] = std::string(to_string(v.status));
  j["measured"] = v.measured_value ? metric_to_json(*v.measured_value) : json(nullptr);
  j["measured_exact"] = (v.measured_value && v.measured_value->exact)
                            ? json::array({v.measured_value->exact->num(), v.measured_value->exact->den()})
                            : json(nullptr);
  j["detail"] = v.detail;
  return j;
}

Verdict verdict_from_json(const json& j) {
  FieldReader r(j, "verdict");
  Verdict v;
  v.condition = parse_condition(r.string("condition"));
  const std::string status = r.string("status");
  if (status == "PASS") {
    v.status = VerdictStatus::kPass;
  } else if (status == "FAIL") {
    v.status = VerdictStatus::kFail;
  } else if (status == "ERROR") {
    v.status = VerdictStatus::kError;
  } else {
    throw SchemaError("verdict.status: unknown status " + status);
  }
  const json* measured = r.optional("measured");
  const json* exact = r.optional("measured_exact");
  if (measured != nullptr) v.measured_value = metric_from_json(*measured, exact ? *exact : json(nullptr));
  v.detail = r.string("detail");
  r.finish();
  return v;
}

json to_json(const TestResult& r) {
  json j;
  j["test_case_id"] = r.test_case_id;
  j["status"] = std::string(to_string(r.status()));
  j["verdicts"] = json::array();
  for (const auto& v : r.verdicts) j["verdicts"].push_back(to_json(v));
  j["evidence"] = r.evidence;
  j["wall_time_ms"] = r.wall_time_ms;
  j["error"] = r.error ? json(*r.error) : json(nullptr);
  return j;
}

TestResult result_from_json(const json& j) {
  FieldReader r(j, "result");
  TestResult out;
  out.test_case_id = r.string("test_case_id");
  r.string("status");
  const json& verdicts = r.required("verdicts");
  if (!verdicts.is_array()) throw SchemaError("result.verdicts: expected an array");
  for (const auto& v : verdicts) out.verdicts.push_back(verdict_from_json(v));
  const json& evidence = r.required("evidence");
  if (!evidence.is_object()) throw SchemaError("result.evidence: expected an object");
  for (const auto& [path, id] : evidence.items()) out.evidence[path] = id.get<std::string>();
  out.wall_time_ms = r.number("wall_time_ms");
  out.error = r.optional_string("error");
  r.finish();
  return out;
}

}  // namespace qase
