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

namespace qase {

// Closed set of quality attributes with an `other:<name>` escape.
struct QualityAttribute {
  enum class Kind { kFairness, kRobustness, kPerformance, kInterpretability, kOther };
  Kind kind = Kind::kOther;
  std::string other_name;  // only for kOther

  static QualityAttribute fairness() { return {Kind::kFairness, {}}; }
  static QualityAttribute robustness() { return {Kind::kRobustness, {}}; }
  static QualityAttribute performance() { return {Kind::kPerformance, {}}; }
  static QualityAttribute interpretability() { return {Kind::kInterpretability, {}}; }
  static QualityAttribute other(std::string name) { return {Kind::kOther, std::move(name)}; }

  // Throws SchemaError("unknown quality_attribute ...") outside the set.
  static QualityAttribute parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const QualityAttribute&, const QualityAttribute&) = default;
  friend auto operator<=>(const QualityAttribute&, const QualityAttribute&) = default;
};

// Closed set of operating environments with a `custom:<name>` escape.
struct Environment {
  enum class Kind { kNormalOperation, kOverload, kStartup, kDevelopmentTime, kCustom };
  Kind kind = Kind::kNormalOperation;
  std::string custom_name;

  static Environment normal_operation() { return {Kind::kNormalOperation, {}}; }
  static Environment custom(std::string name) { return {Kind::kCustom, std::move(name)}; }

  static Environment parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const Environment&, const Environment&) = default;
};

// Data transform applied to a dataset to produce a perturbed copy.
struct TransformSpec {
  enum class Kind { kNone, kBlur, kChannelDrop, kInputFailure };
  Kind kind = Kind::kNone;
  std::vector<double> sigmas;  // blur
  std::vector<int> channels;   // channel_drop, each in {0,1,2}
  double probability = 0.0;    // input_failure

  static Kind parse_kind(std::string_view text);
  static std::string_view kind_name(Kind kind);

  friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

struct MeasurementSpec {
  std::string id;
  std::map<std::string, std::string> params;

  friend bool operator==(const MeasurementSpec&, const MeasurementSpec&) = default;
};

struct DataSpec {
  std::string manifest_path;
  std::vector<std::string> required_groups;
  std::map<std::string, double> group_weights;  // empty: no representativeness check
  double representativeness_tolerance = 0.10;   // relative, per group
  std::vector<TransformSpec> transforms;

  friend bool operator==(const DataSpec&, const DataSpec&) = default;
};

struct ContextSpec {
  Environment environment;
  std::optional<double> arrival_rate_hz;
  std::optional<double> input_failure_prob;

  friend bool operator==(const ContextSpec&, const ContextSpec&) = default;
};

// A field-level violation. `field` is a dotted/indexed path into the
// document, e.g. "response_measures[1].condition".
struct Violation {
  std::string field;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

// Checks of the binding types shared by scenarios, test cases and catalog
// templates. Append violations under `prefix`. check_data_spec does not
// descend into transforms.
void check_transform(const TransformSpec& t, const std::string& prefix, ValidationReport& out);
void check_data_spec(const DataSpec& d, const std::string& prefix, bool require_manifest,
                     ValidationReport& out);
void check_context(const ContextSpec& c, const std::string& prefix, ValidationReport& out);

// Metric paths emitted by each measurement. A trailing `*` segment matches
// exactly one further segment.
struct MeasurementInfo {
  std::string id;
  std::vector<std::string> produces;
  std::vector<std::string> required_params;
  std::string description;
};

const std::vector<MeasurementInfo>& measurement_registry();
const MeasurementInfo* find_measurement(std::string_view id);

// Paths the harness emits for every test case regardless of measurements.
const std::vector<std::string>& harness_metric_paths();

bool metric_pattern_matches(std::string_view pattern, std::string_view path);

// Id of the first listed measurement producing `path`, "harness" for the
// always-present paths, nullopt if nothing produces it.
std::optional<std::string> find_producer(const std::string& path,
                                         const std::vector<MeasurementSpec>& measurements);

// Metric path segment for each level of a perturbation suite, in generation
// order: blur_minimal/intermediate/maximal, channel_drop_red/green/blue,
// input_failure.
std::vector<std::string> transform_level_names(const TransformSpec& t);

}  // namespace qase
