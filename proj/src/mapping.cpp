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

#include "qase/mapping.hpp"

#include <chrono>
#include <ctime>
#include <set>

#include "qase/digest.hpp"
#include "qase/error.hpp"
#include "qase/json_io.hpp"

namespace qase {

using nlohmann::json;

namespace {

std::string utc_now_iso8601() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json data_spec_to_json(const DataSpec& d) {
  json j;
  j["manifest"] = d.manifest_path;
  j["required_groups"] = d.required_groups;
  j["group_weights"] = json::object();
  for (const auto& [g, w] : d.group_weights) j["group_weights"][g] = w;
  j["representativeness_tolerance"] = d.representativeness_tolerance;
  j["transforms"] = json::array();
  for (const auto& t : d.transforms) j["transforms"].push_back(to_json(t));
  return j;
}

DataSpec data_spec_from_json(const json& j, const std::string& where) {
  FieldReader r(j, where);
  DataSpec d;
  d.manifest_path = r.string("manifest");
  d.required_groups = r.string_list("required_groups");
  const json& w = r.required("group_weights");
  if (!w.is_object()) throw SchemaError(r.field("group_weights") + ": expected an object");
  for (const auto& [g, v] : w.items()) d.group_weights[g] = v.get<double>();
  d.representativeness_tolerance = r.number("representativeness_tolerance");
  const json& ts = r.required("transforms");
  if (!ts.is_array()) throw SchemaError(r.field("transforms") + ": expected an array");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    d.transforms.push_back(transform_from_json(ts[i], r.field("transforms") + "[" + std::to_string(i) + "]"));
  }
  r.finish();
  return d;
}

}  // namespace

const QAScenario* TestPlan::scenario_for(const TestCase& tc) const {
  for (const auto& s : scenarios) {
    if (s.id == tc.scenario_id) return &s;
  }
  return nullptr;
}

TestCase map_scenario_to_test_case(const QAScenario& scenario) {
  if (scenario.response_measures.empty()) {
    throw MappingError("scenario " + scenario.id + " has no response measures");
  }
  const TestBinding& binding = scenario.test_binding;
  for (const auto& m : binding.measurements) {
    if (find_measurement(m.id) == nullptr) throw MappingError("unknown measurement " + m.id);
  }

  TestCase tc;
  tc.id = "tc-" + scenario.id;
  tc.scenario_id = scenario.id;
  tc.data_spec = binding.dataset;
  tc.measurements = binding.measurements;
  tc.context = {scenario.environment, binding.arrival_rate_hz, binding.input_failure_prob};

  for (const auto& rm : scenario.response_measures) {
    Condition c;
    try {
      c = parse_condition(rm.condition);
    } catch (const ConditionSyntaxError& e) {
      throw MappingError("scenario " + scenario.id + ": bad condition \"" + rm.condition + "\": " + e.what());
    }
    if (!find_producer(c.metric_path, tc.measurements)) {
      throw MappingError("no producer for " + c.metric_path);
    }
    tc.conditions.push_back(std::move(c));
  }
  return tc;
}

ValidationReport check_test_case(const TestCase& tc, const ScenarioStore* store, bool require_manifest) {
  ValidationReport report;
  if (tc.id.empty()) report.push_back({"id", "must not be empty"});
  if (store != nullptr && store->find(tc.scenario_id) == nullptr) {
    report.push_back({"scenario_id", "unresolved scenario " + tc.scenario_id});
  }
  for (std::size_t i = 0; i < tc.measurements.size(); ++i) {
    if (find_measurement(tc.measurements[i].id) == nullptr) {
      report.push_back({"measurements[" + std::to_string(i) + "].id", "unknown measurement " + tc.measurements[i].id});
    }
  }
  for (std::size_t i = 0; i < tc.conditions.size(); ++i) {
    const auto& path = tc.conditions[i].metric_path;
    if (!find_producer(path, tc.measurements)) {
      report.push_back({"conditions[" + std::to_string(i) + "]", "no producer for " + path});
    }
  }
  check_data_spec(tc.data_spec, "data_spec", require_manifest, report);
  for (std::size_t i = 0; i < tc.data_spec.transforms.size(); ++i) {
    check_transform(tc.data_spec.transforms[i], "data_spec.transforms[" + std::to_string(i) + "]", report);
  }
  check_context(tc.context, "context", report);
  return report;
}

TestPlan build_test_plan(const std::vector<QAScenario>& scenarios) {
  std::set<std::string> ids;
  for (const auto& s : scenarios) {
    if (!ids.insert(s.id).second) throw MappingError("duplicate scenario id " + s.id);
  }
  TestPlan plan;
  for (const auto& s : scenarios) {
    const ValidationReport report = validate_scenario(s);
    if (!report.empty()) {
      throw MappingError("scenario " + s.id + " is invalid: " + report.front().field + ": " +
                         report.front().message);
    }
    plan.cases.push_back(map_scenario_to_test_case(s));
  }
  plan.scenarios = scenarios;
  json cases = json::array();
  for (const auto& tc : plan.cases) cases.push_back(to_json(tc));
  plan.id = "plan-" + sha256_hex(cases.dump()).substr(0, 12);
  plan.created_at = utc_now_iso8601();
  return plan;
}

json to_json(const TestCase& tc) {
  json j;
  j["id"] = tc.id;
  j["scenario_id"] = tc.scenario_id;
  j["data_spec"] = data_spec_to_json(tc.data_spec);
  j["measurements"] = json::array();
  for (const auto& m : tc.measurements) j["measurements"].push_back(to_json(m));
  j["conditions"] = json::array();
  for (const auto& c : tc.conditions) j["conditions"].push_back(serialize_condition(c));
  j["context"] = {{"environment", tc.context.environment.str()},
                  {"arrival_rate_hz", tc.context.arrival_rate_hz ? json(*tc.context.arrival_rate_hz) : json(nullptr)},
                  {"input_failure_prob",
                   tc.context.input_failure_prob ? json(*tc.context.input_failure_prob) : json(nullptr)}};
  return j;
}

TestCase test_case_from_json(const json& j, const std::string& where) {
  FieldReader r(j, where);
  TestCase tc;
  tc.id = r.string("id");
  tc.scenario_id = r.string("scenario_id");
  tc.data_spec = data_spec_from_json(r.required("data_spec"), r.field("data_spec"));
  const json& ms = r.required("measurements");
  if (!ms.is_array()) throw SchemaError(r.field("measurements") + ": expected an array");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    tc.measurements.push_back(measurement_from_json(ms[i], r.field("measurements") + "[" + std::to_string(i) + "]"));
  }
  for (const auto& text : r.string_list("conditions")) {
    try {
      tc.conditions.push_back(parse_condition(text));
    } catch (const ConditionSyntaxError& e) {
      throw SchemaError(r.field("conditions") + ": " + e.what());
    }
  }
  FieldReader c(r.required("context"), r.field("context"));
  tc.context.environment = Environment::parse(c.string("environment"));
  tc.context.arrival_rate_hz = c.optional_number("arrival_rate_hz");
  tc.context.input_failure_prob = c.optional_number("input_failure_prob");
  c.finish();
  r.finish();
  return tc;
}

json to_json(const TestPlan& plan) {
  json j;
  j["id"] = plan.id;
  j["created_at"] = plan.created_at;
  j["cases"] = json::array();
  for (const auto& tc : plan.cases) j["cases"].push_back(to_json(tc));
  j["scenarios"] = json::array();
  for (const auto& s : plan.scenarios) j["scenarios"].push_back(to_json(s));
  return j;
}

TestPlan plan_from_json(const json& j) {
  FieldReader r(j, "");
  TestPlan plan;
  plan.id = r.string("id");
  plan.created_at = r.string("created_at");
  const json& cases = r.required("cases");
  if (!cases.is_array()) throw SchemaError("cases: expected an array");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    plan.cases.push_back(test_case_from_json(cases[i], "cases[" + std::to_string(i) + "]"));
  }
  const json& scenarios = r.required("scenarios");
  if (!scenarios.is_array()) throw SchemaError("scenarios: expected an array");
  for (const auto& s : scenarios) plan.scenarios.push_back(scenario_from_json(s));
  r.finish();
  return plan;
}

TestPlan load_plan(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    return plan_from_json(j);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void save_plan(const TestPlan& plan, const std::filesystem::path& path) { write_json_file(path, to_json(plan)); }

}  // namespace qase
