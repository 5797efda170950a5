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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qase/binding.hpp"

namespace qase {

struct ResponseMeasure {
  std::string description;
  std::string condition;  // condition-language text, see condition.hpp

  friend bool operator==(const ResponseMeasure&, const ResponseMeasure&) = default;
};

// Structured annotations the mapper consumes; prose fields are never parsed.
struct TestBinding {
  DataSpec dataset;  // dataset.transforms is stored as test_binding.transforms
  std::vector<MeasurementSpec> measurements;
  std::optional<double> arrival_rate_hz;
  std::optional<double> input_failure_prob;

  friend bool operator==(const TestBinding&, const TestBinding&) = default;
};

// Six-part quality attribute scenario. The artifact part is always the model
// under test and is not stored as a field.
struct QAScenario {
  static constexpr const char* kArtifact = "model-under-test";

  std::string id;
  QualityAttribute quality_attribute;
  std::string stimulus;
  std::string stimulus_source;
  Environment environment;
  std::string response;
  std::vector<ResponseMeasure> response_measures;
  TestBinding test_binding;

  friend bool operator==(const QAScenario&, const QAScenario&) = default;
};

struct NegotiationCard {
  std::string system_context;
  std::vector<std::string> goals;
  std::vector<std::string> scenario_ids;
  std::vector<QualityAttribute> priorities;
  std::string tradeoff_notes;

  friend bool operator==(const NegotiationCard&, const NegotiationCard&) = default;
};

// Every invariant of a scenario, checked without throwing. A scenario with an
// empty report maps to a test case without error.
ValidationReport validate_scenario(const QAScenario& scenario);

// Scenarios indexed by id. Can be filled in memory or from a directory of
// *.json scenario files.
class ScenarioStore {
 public:
  ScenarioStore() = default;
  static ScenarioStore open(const std::filesystem::path& dir);

  // Replaces any scenario with the same id.
  void add(QAScenario scenario);
  const QAScenario* find(const std::string& id) const;
  std::size_t size() const { return scenarios_.size(); }

 private:
  std::map<std::string, QAScenario> scenarios_;
};

ValidationReport validate_card(const NegotiationCard& card, const ScenarioStore& store);

// JSON documents. Unknown fields and out-of-set tags raise SchemaError;
// malformed text raises ParseError with line and column.
nlohmann::json to_json(const QAScenario& scenario);
QAScenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NegotiationCard& card);
NegotiationCard card_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TransformSpec& t);
TransformSpec transform_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json to_json(const MeasurementSpec& m);
MeasurementSpec measurement_from_json(const nlohmann::json& j, const std::string& where);

QAScenario load_scenario(const std::filesystem::path& path);
void save_scenario(const QAScenario& scenario, const std::filesystem::path& path);
NegotiationCard load_card(const std::filesystem::path& path);
void save_card(const NegotiationCard& card, const std::filesystem::path& path);

}  // namespace qase
