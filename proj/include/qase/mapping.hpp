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
#include <string>
#include <vector>

#include "json.hpp"
#include "qase/binding.hpp"
#include "qase/condition.hpp"
#include "qase/scenario.hpp"

namespace qase {

// Executable translation of one scenario: stimulus and source become the
// data spec, response measures become measurements plus conditions, and the
// environment becomes the context.
struct TestCase {
  std::string id;
  std::string scenario_id;
  DataSpec data_spec;
  std::vector<MeasurementSpec> measurements;
  std::vector<Condition> conditions;  // ANDed, one per response measure
  ContextSpec context;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct TestPlan {
  std::string id;
  std::string created_at;  // ISO-8601 UTC
  std::vector<TestCase> cases;
  // Source scenarios in case order; reports quote their prose.
  std::vector<QAScenario> scenarios;

  const QAScenario* scenario_for(const TestCase& tc) const;
};

// Deterministic; throws MappingError for input that fails validation
// (no response measures, unparsable condition, metric without a producer).
TestCase map_scenario_to_test_case(const QAScenario& scenario);

// Static checks of a test case. `store` may be null to skip resolution of
// scenario_id; `require_manifest` is off for catalog templates.
ValidationReport check_test_case(const TestCase& tc, const ScenarioStore* store, bool require_manifest);

// One case per scenario in input order. Throws MappingError on duplicate
// scenario ids or invalid scenarios. The plan id is derived from the cases,
// so equal inputs give equal ids.
TestPlan build_test_plan(const std::vector<QAScenario>& scenarios);

nlohmann::json to_json(const TestCase& tc);
TestCase test_case_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json to_json(const TestPlan& plan);
TestPlan plan_from_json(const nlohmann::json& j);
TestPlan load_plan(const std::filesystem::path& path);
void save_plan(const TestPlan& plan, const std::filesystem::path& path);

// Reusable test-case template for one quality attribute.
struct CatalogEntry {
  static constexpr const char* kManifestPlaceholder = "<manifest>";
  static constexpr const char* kModelDirPlaceholder = "<model_dir>";

  std::string name;
  QualityAttribute quality_attribute;
  std::string documentation;
  // Scenario whose binding uses the placeholders above.
  QAScenario scenario_template;
  TestCase template_case;

  // Scenario with placeholders substituted; `groups`, when non-empty,
  // becomes the required group list.
  QAScenario instantiate(const std::string& manifest_path, const std::string& model_dir,
                         const std::vector<std::string>& groups = {}) const;
};

class Catalog {
 public:
  // The five built-in entries: fairness, robustness to blur, robustness to
  // channel loss, platform performance, interpretability evidence.
  static Catalog builtin();

  // Adds every *.json entry file in `dir` ({"name", "documentation",
  // "scenario"}). Templates failing static checks raise SchemaError.
  void load_dir(const std::filesystem::path& dir);
  void add(CatalogEntry entry);

  std::vector<CatalogEntry> lookup(const QualityAttribute& attribute) const;
  const std::vector<CatalogEntry>& entries() const& { return entries_; }
  std::vector<CatalogEntry> entries() && { return std::move(entries_); }
  const CatalogEntry* find(const std::string& name) const;

 private:
  std::vector<CatalogEntry> entries_;
};

std::vector<CatalogEntry> catalog_lookup(const QualityAttribute& attribute,
                                         const Catalog& catalog = Catalog::builtin());

}  // namespace qase
