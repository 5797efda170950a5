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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qase/condition.hpp"
#include "qase/metrics.hpp"

namespace qase {

enum class CaseStatus { kPassed, kFailed, kErrored };
std::string_view to_string(CaseStatus s);

struct TestResult {
  std::string test_case_id;
  MetricSet metrics;
  std::vector<Verdict> verdicts;  // one per condition, in condition order
  // Evidence record id per metric path.
  std::map<std::string, std::string> evidence;
  double wall_time_ms = 0.0;
  // Set when the case could not run (adapter protocol failure, bad data).
  std::optional<std::string> error;

  // errored if `error` is set or any verdict errored; failed if any verdict
  // failed; passed otherwise.
  CaseStatus status() const;
  std::vector<std::string> evidence_refs() const;
};

nlohmann::json to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);
nlohmann::json metric_to_json(const MetricValue& v);
MetricValue metric_from_json(const nlohmann::json& value, const nlohmann::json& exact);

// Metrics are not included; they live in the evidence store.
nlohmann::json to_json(const TestResult& r);
TestResult result_from_json(const nlohmann::json& j);

}  // namespace qase
