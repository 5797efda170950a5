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

#include <algorithm>

#include "qase/error.hpp"
#include "qase/json_io.hpp"
#include "qase/mapping.hpp"

namespace qase {
namespace {

constexpr const char* kManifest = CatalogEntry::kManifestPlaceholder;

QAScenario base(std::string id, QualityAttribute qa) {
  QAScenario s;
  s.id = std::move(id);
  s.quality_attribute = std::move(qa);
  s.environment = Environment::normal_operation();
  s.test_binding.dataset.manifest_path = kManifest;
  return s;
}

QAScenario fairness_template() {
  QAScenario s = base("fairness-photo-location", QualityAttribute::fairness());
  s.stimulus = "A photo of a flower is submitted for identification.";
  s.stimulus_source = "A visitor standing in any one of the garden sections.";
  s.response = "The flower is named correctly no matter which section the photo came from.";
  s.response_measures = {{"Accuracy in the worst-served section is at least 0.9.", "accuracy.min_group >= 0.9"}};
  s.test_binding.measurements = {{"group_accuracy", {}}};
  return s;
}

QAScenario blur_template() {
  QAScenario s = base("robustness-blur", QualityAttribute::robustness());
  s.stimulus = "A slightly out-of-focus photo of a flower is submitted.";
  s.stimulus_source = "A visitor with an unsteady hand or a dirty lens.";
  s.response = "Blurred photos are identified as often as sharp ones.";
  s.response_measures = {{"Rank-sum test finds no significant difference between sharp and blurred "
                          "correctness at any of three blur levels (p > 0.05).",
                          "wilcoxon.p_two_sided > 0.05"}};
  s.test_binding.dataset.transforms = {{TransformSpec::Kind::kBlur, {1.0, 2.0, 4.0}, {}, 0.0}};
  s.test_binding.measurements = {{"rank_sum", {}}};
  return s;
}

QAScenario channel_template() {
  QAScenario s = base("robustness-channel-loss", QualityAttribute::robustness());
  s.stimulus = "A photo with one colour channel missing is submitted.";
  s.stimulus_source = "A loaned device whose camera drops the red, green or blue channel.";
  s.response = "Photos missing a channel are identified as often as complete ones.";
  s.response_measures = {{"Rank-sum test finds no significant difference for any dropped channel (p > 0.05).",
                          "wilcoxon.p_two_sided > 0.05"}};
  s.test_binding.dataset.transforms = {{TransformSpec::Kind::kChannelDrop, {}, {0, 1, 2}, 0.0}};
  s.test_binding.measurements = {{"rank_sum", {}}};
  return s;
}

QAScenario performance_template() {
  QAScenario s = base("performance-loaned-device", QualityAttribute::performance());
  s.stimulus = "The model serves the held-out test set on a loaned device.";
  s.stimulus_source = "The garden app running on a small, low-cost handheld.";
  s.response = "Inference completes without running out of CPU, memory or disk.";
  s.response_measures = {
      {"Peak CPU usage stays at or below 30%.", "cpu.max_percent <= 30"},
      {"Peak resident memory stays within the 512 MB available.", "memory.peak_bytes <= 512MB"},
      {"Model files fit in the 128 GB of disk.", "disk.total_bytes <= 128GB"},
  };
  s.test_binding.measurements = {{"resource_monitor", {{"interval_ms", "100"}}},
                                 {"disk_usage", {{"path", CatalogEntry::kModelDirPlaceholder}}}};
  return s;
}

QAScenario interpretability_template() {
  QAScenario s = base("interpretability-evidence", QualityAttribute::interpretability());
  s.stimulus = "A visitor asks which parts of the photo drove the identification.";
  s.stimulus_source = "The educational view of the garden app.";
  s.response = "Every prediction comes with a per-pixel attribution map of the input image.";
  s.response_measures = {{"Attribution evidence accompanies every inference.", "evidence.present_rate == 1.0"}};
  s.test_binding.measurements = {{"evidence_check", {}}};
  return s;
}

CatalogEntry make_entry(std::string name, std::string doc, QAScenario scenario) {
  CatalogEntry e;
  e.name = std::move(name);
  e.quality_attribute = scenario.quality_attribute;
  e.documentation = std::move(doc);
  e.template_case = map_scenario_to_test_case(scenario);
  e.scenario_template = std::move(scenario);
  return e;
}

std::string substitute(const std::string& value, const std::string& manifest, const std::string& model_dir) {
  if (value == CatalogEntry::kManifestPlaceholder) return manifest;
  if (value == CatalogEntry::kModelDirPlaceholder) return model_dir;
  return value;
}

}  // namespace

QAScenario CatalogEntry::instantiate(const std::string& manifest_path, const std::string& model_dir,
                                     const std::vector<std::string>& groups) const {
  QAScenario s = scenario_template;
  auto& ds = s.test_binding.dataset;
  ds.manifest_path = substitute(ds.manifest_path, manifest_path, model_dir);
  for (auto& m : s.test_binding.measurements) {
    for (auto& [key, value] : m.params) value = substitute(value, manifest_path, model_dir);
  }
  if (!groups.empty()) ds.required_groups = groups;
  return s;
}

Catalog Catalog::builtin() {
  Catalog c;
  c.add(make_entry("fairness-group-accuracy",
                   "Group-conditioned accuracy over the manifest's population groups; the condition "
                   "bounds the worst group.",
                   fairness_template()));
  c.add(make_entry("robustness-blur",
                   "Three Gaussian blur levels; each perturbed set is compared to the original by a "
                   "two-sided rank-sum test on per-image correctness.",
                   blur_template()));
  c.add(make_entry("robustness-channel-loss",
                   "Red, green and blue channels zeroed in turn; rank-sum test per channel.",
                   channel_template()));
  c.add(make_entry("performance-platform",
                   "CPU and resident memory sampled from the model process, disk usage summed over the "
                   "model directory.",
                   performance_template()));
  c.add(make_entry("interpretability-evidence",
                   "Evidence requested with every inference; checks presence, matching shape and "
                   "finite values.",
                   interpretability_template()));
  return c;
}

void Catalog::add(CatalogEntry entry) { entries_.push_back(std::move(entry)); }

void Catalog::load_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& item : std::filesystem::directory_iterator(dir)) {
    if (item.is_regular_file() && item.path().extension() == ".json") files.push_back(item.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const nlohmann::json j = read_json_file(path);
    FieldReader r(j, path.filename().string());
    const std::string name = r.string("name");
    const std::string doc = r.optional_string("documentation").value_or("");
    QAScenario scenario = scenario_from_json(r.required("scenario"));
    r.finish();
    if (const auto report = validate_scenario(scenario); !report.empty()) {
      throw SchemaError(path.string() + ": template " + report.front().field + ": " + report.front().message);
    }
    add(make_entry(name, doc, std::move(scenario)));
  }
}

std::vector<CatalogEntry> Catalog::lookup(const QualityAttribute& attribute) const {
  std::vector<CatalogEntry> out;
  std::copy_if(entries_.begin(), entries_.end(), std::back_inserter(out),
               [&](const CatalogEntry& e) { return e.quality_attribute == attribute; });
  return out;
}

const CatalogEntry* Catalog::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::vector<CatalogEntry> catalog_lookup(const QualityAttribute& attribute, const Catalog& catalog) {
  return catalog.lookup(attribute);
}

}  // namespace qase
