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

#include "qase/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "qase/condition.hpp"
#include "qase/error.hpp"
#include "qase/json_io.hpp"

namespace qase {

using nlohmann::json;

namespace {

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

json optional_number_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

DataSpec dataset_from_json(const json& j, const std::string& where) {
  FieldReader r(j, where);
  DataSpec d;
  d.manifest_path = r.string("manifest");
  if (r.has("required_groups")) d.required_groups = r.string_list("required_groups");
  if (const json* w = r.optional("group_weights")) {
    if (!w->is_object()) throw SchemaError(r.field("group_weights") + ": expected an object");
    for (const auto& [group, weight] : w->items()) {
      if (!weight.is_number()) throw SchemaError(r.field("group_weights") + "." + group + ": expected a number");
      d.group_weights[group] = weight.get<double>();
    }
  }
  if (auto tol = r.optional_number("representativeness_tolerance")) d.representativeness_tolerance = *tol;
  r.finish();
  return d;
}

json dataset_to_json(const DataSpec& d) {
  json j;
  j["manifest"] = d.manifest_path;
  j["required_groups"] = d.required_groups;
  j["group_weights"] = json::object();
  for (const auto& [g, w] : d.group_weights) j["group_weights"][g] = w;
  j["representativeness_tolerance"] = d.representativeness_tolerance;
  return j;
}

}  // namespace

json to_json(const TransformSpec& t) {
  json j;
  j["kind"] = std::string(TransformSpec::kind_name(t.kind));
  switch (t.kind) {
    case TransformSpec::Kind::kNone: break;
    case TransformSpec::Kind::kBlur: j["sigmas"] = t.sigmas; break;
    case TransformSpec::Kind::kChannelDrop: j["channels"] = t.channels; break;
    case TransformSpec::Kind::kInputFailure: j["probability"] = t.probability; break;
  }
  return j;
}

TransformSpec transform_from_json(const json& j, const std::string& where) {
  FieldReader r(j, where);
  TransformSpec t;
  t.kind = TransformSpec::parse_kind(r.string("kind"));
  switch (t.kind) {
    case TransformSpec::Kind::kNone:
      break;
    case TransformSpec::Kind::kBlur: {
      const json& s = r.required("sigmas");
      if (!s.is_array()) throw SchemaError(r.field("sigmas") + ": expected an array");
      for (const auto& v : s) {
        if (!v.is_number()) throw SchemaError(r.field("sigmas") + ": expected numbers");
        t.sigmas.push_back(v.get<double>());
      }
      break;
    }
    case TransformSpec::Kind::kChannelDrop: {
      const json& c = r.required("channels");
      if (!c.is_array()) throw SchemaError(r.field("channels") + ": expected an array");
      for (const auto& v : c) {
        if (!v.is_number_integer()) throw SchemaError(r.field("channels") + ": expected integers");
        t.channels.push_back(v.get<int>());
      }
      break;
    }
    case TransformSpec::Kind::kInputFailure:
      t.probability = r.number("probability");
      break;
  }
  r.finish();
  return t;
}

json to_json(const MeasurementSpec& m) {
  json j;
  j["id"] = m.id;
  j["params"] = json::object();
  for (const auto& [k, v] : m.params) j["params"][k] = v;
  return j;
}

MeasurementSpec measurement_from_json(const json& j, const std::string& where) {
  FieldReader r(j, where);
  MeasurementSpec m;
  m.id = r.string("id");
  if (const json* p = r.optional("params")) {
    if (!p->is_object()) throw SchemaError(r.field("params") + ": expected an object");
    for (const auto& [k, v] : p->items()) {
      if (!v.is_string()) throw SchemaError(r.field("params") + "." + k + ": expected a string");
      m.params[k] = v.get<std::string>();
    }
  }
  r.finish();
  return m;
}

json to_json(const QAScenario& s) {
  json binding;
  binding["dataset"] = dataset_to_json(s.test_binding.dataset);
  binding["transforms"] = json::array();
  for (const auto& t : s.test_binding.dataset.transforms) binding["transforms"].push_back(to_json(t));
  binding["measurements"] = json::array();
  for (const auto& m : s.test_binding.measurements) binding["measurements"].push_back(to_json(m));
  binding["context"] = {{"arrival_rate_hz", optional_number_json(s.test_binding.arrival_rate_hz)},
                        {"input_failure_prob", optional_number_json(s.test_binding.input_failure_prob)}};

  json measures = json::array();
  for (const auto& m : s.response_measures) {
    measures.push_back({{"description", m.description}, {"condition", m.condition}});
  }

  json j;
  j["id"] = s.id;
  j["quality_attribute"] = s.quality_attribute.str();
  j["stimulus"] = s.stimulus;
  j["stimulus_source"] = s.stimulus_source;
  j["environment"] = s.environment.str();
  j["artifact"] = QAScenario::kArtifact;
  j["response"] = s.response;
  j["response_measures"] = std::move(measures);
  j["test_binding"] = std::move(binding);
  return j;
}

QAScenario scenario_from_json(const json& j) {
  FieldReader r(j, "");
  QAScenario s;
  s.id = r.string("id");
  s.quality_attribute = QualityAttribute::parse(r.string("quality_attribute"));
  s.stimulus = r.string("stimulus");
  s.stimulus_source = r.string("stimulus_source");
  s.environment = Environment::parse(r.string("environment"));
  if (auto artifact = r.optional_string("artifact"); artifact && *artifact != QAScenario::kArtifact) {
    throw SchemaError("artifact must be \"" + std::string(QAScenario::kArtifact) + "\", got \"" +
                      *artifact + "\"");
  }
  s.response = r.string("response");

  const json& measures = r.required("response_measures");
  if (!measures.is_array()) throw SchemaError("response_measures: expected an array");
  for (std::size_t i = 0; i < measures.size(); ++i) {
    FieldReader m(measures[i], indexed("response_measures", i));
    s.response_measures.push_back({m.string("description"), m.string("condition")});
    m.finish();
  }

  FieldReader b(r.required("test_binding"), "test_binding");
  s.test_binding.dataset = dataset_from_json(b.required("dataset"), "test_binding.dataset");
  if (const json* ts = b.optional("transforms")) {
    if (!ts->is_array()) throw SchemaError("test_binding.transforms: expected an array");
    for (std::size_t i = 0; i < ts->size(); ++i) {
      s.test_binding.dataset.transforms.push_back(
          transform_from_json((*ts)[i], indexed("test_binding.transforms", i)));
    }
  }
  const json& ms = b.required("measurements");
  if (!ms.is_array()) throw SchemaError("test_binding.measurements: expected an array");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    s.test_binding.measurements.push_back(measurement_from_json(ms[i], indexed("test_binding.measurements", i)));
  }
  if (const json* ctx = b.optional("context")) {
    FieldReader c(*ctx, "test_binding.context");
    s.test_binding.arrival_rate_hz = c.optional_number("arrival_rate_hz");
    s.test_binding.input_failure_prob = c.optional_number("input_failure_prob");
    c.finish();
  }
  b.finish();
  r.finish();
  return s;
}

ValidationReport validate_scenario(const QAScenario& s) {
  ValidationReport report;
  auto require_text = [&](const std::string& value, const char* field) {
    if (blank(value)) report.push_back({field, "must not be empty"});
  };
  require_text(s.id, "id");
  require_text(s.stimulus, "stimulus");
  require_text(s.stimulus_source, "stimulus_source");
  require_text(s.response, "response");
  if (s.quality_attribute.kind == QualityAttribute::Kind::kOther && blank(s.quality_attribute.other_name)) {
    report.push_back({"quality_attribute", "other: tag needs a name"});
  }

  const auto& binding = s.test_binding;
  for (std::size_t i = 0; i < binding.measurements.size(); ++i) {
    const auto& m = binding.measurements[i];
    const std::string field = indexed("test_binding.measurements", i);
    const MeasurementInfo* info = find_measurement(m.id);
    if (info == nullptr) {
      report.push_back({field + ".id", "unknown measurement \"" + m.id + "\""});
      continue;
    }
    for (const auto& p : info->required_params) {
      if (!m.params.contains(p)) report.push_back({field + ".params." + p, "required by " + m.id});
    }
    if (m.id == "rank_sum") {
      const auto& ts = binding.dataset.transforms;
      const bool any = std::any_of(ts.begin(), ts.end(),
                                   [](const TransformSpec& t) { return t.kind != TransformSpec::Kind::kNone; });
      if (!any) report.push_back({field, "rank_sum needs at least one transform"});
    }
  }

  if (s.response_measures.empty()) {
    report.push_back({"response_measures", "at least one response measure is required"});
  }
  for (std::size_t i = 0; i < s.response_measures.size(); ++i) {
    const auto& rm = s.response_measures[i];
    const std::string field = indexed("response_measures", i);
    if (blank(rm.description)) report.push_back({field + ".description", "must not be empty"});
    try {
      const Condition c = parse_condition(rm.condition);
      if (!find_producer(c.metric_path, binding.measurements)) {
        report.push_back({field + ".condition", "no producer for " + c.metric_path});
      }
    } catch (const ConditionSyntaxError& e) {
      report.push_back({field + ".condition", "condition parse failure at column " +
                                                  std::to_string(e.column()) + ": " + e.message()});
    }
  }

  check_data_spec(binding.dataset, "test_binding.dataset", /*require_manifest=*/true, report);
  for (std::size_t i = 0; i < binding.dataset.transforms.size(); ++i) {
    check_transform(binding.dataset.transforms[i], indexed("test_binding.transforms", i), report);
  }
  check_context({s.environment, binding.arrival_rate_hz, binding.input_failure_prob},
                "test_binding.context", report);
  return report;
}

ScenarioStore ScenarioStore::open(const std::filesystem::path& dir) {
  ScenarioStore store;
  if (!std::filesystem::is_directory(dir)) throw Error("scenario directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && (name.ends_with(".scenario") || name.ends_with(".scenario.json"))) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) store.add(load_scenario(f));
  return store;
}

void ScenarioStore::add(QAScenario scenario) {
  std::string id = scenario.id;
  scenarios_.insert_or_assign(std::move(id), std::move(scenario));
}

const QAScenario* ScenarioStore::find(const std::string& id) const {
  const auto it = scenarios_.find(id);
  return it == scenarios_.end() ? nullptr : &it->second;
}

ValidationReport validate_card(const NegotiationCard& card, const ScenarioStore& store) {
  ValidationReport report;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < card.scenario_ids.size(); ++i) {
    const std::string& id = card.scenario_ids[i];
    const std::string field = indexed("scenario_ids", i);
    if (!ids.insert(id).second) report.push_back({field, "duplicate scenario " + id});
    if (store.find(id) == nullptr) report.push_back({field, "unresolved scenario " + id});
  }
  std::set<QualityAttribute> seen;
  for (std::size_t i = 0; i < card.priorities.size(); ++i) {
    if (!seen.insert(card.priorities[i]).second) {
      report.push_back({indexed("priorities", i), "duplicate priority " + card.priorities[i].str()});
    }
  }
  return report;
}

json to_json(const NegotiationCard& card) {
  json j;
  j["system_context"] = card.system_context;
  j["goals"] = card.goals;
  j["scenario_ids"] = card.scenario_ids;
  j["priorities"] = json::array();
  for (const auto& p : card.priorities) j["priorities"].push_back(p.str());
  j["tradeoff_notes"] = card.tradeoff_notes;
  return j;
}

NegotiationCard card_from_json(const json& j) {
  FieldReader r(j, "");
  NegotiationCard card;
  card.system_context = r.string("system_context");
  card.goals = r.string_list("goals");
  card.scenario_ids = r.string_list("scenario_ids");
  for (const auto& p : r.string_list("priorities")) card.priorities.push_back(QualityAttribute::parse(p));
  card.tradeoff_notes = r.optional_string("tradeoff_notes").value_or("");
  r.finish();
  return card;
}

QAScenario load_scenario(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    return scenario_from_json(j);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void save_scenario(const QAScenario& scenario, const std::filesystem::path& path) {
  write_json_file(path, to_json(scenario));
}

NegotiationCard load_card(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    return card_from_json(j);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void save_card(const NegotiationCard& card, const std::filesystem::path& path) {
  write_json_file(path, to_json(card));
}

}  // namespace qase
