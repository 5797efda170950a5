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

#include "qase/binding.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qase/error.hpp"
#include "qase/metrics.hpp"

namespace qase {
namespace {

constexpr std::string_view kOtherPrefix = "other:";
constexpr std::string_view kCustomPrefix = "custom:";

bool is_group_name(const std::string& name) {
  return !name.empty() && name.find('.') == std::string::npos && is_valid_metric_path(name);
}

}  // namespace

QualityAttribute QualityAttribute::parse(std::string_view text) {
  if (text == "fairness") return fairness();
  if (text == "robustness") return robustness();
  if (text == "performance") return performance();
  if (text == "interpretability") return interpretability();
  if (text.starts_with(kOtherPrefix) && text.size() > kOtherPrefix.size()) {
    return other(std::string(text.substr(kOtherPrefix.size())));
  }
  throw SchemaError("unknown quality_attribute \"" + std::string(text) + "\"");
}

std::string QualityAttribute::str() const {
  switch (kind) {
    case Kind::kFairness: return "fairness";
    case Kind::kRobustness: return "robustness";
    case Kind::kPerformance: return "performance";
    case Kind::kInterpretability: return "interpretability";
    case Kind::kOther: return std::string(kOtherPrefix) + other_name;
  }
  return {};
}

Environment Environment::parse(std::string_view text) {
  if (text == "normal_operation") return {Kind::kNormalOperation, {}};
  if (text == "overload") return {Kind::kOverload, {}};
  if (text == "startup") return {Kind::kStartup, {}};
  if (text == "development_time") return {Kind::kDevelopmentTime, {}};
  if (text.starts_with(kCustomPrefix) && text.size() > kCustomPrefix.size()) {
    return custom(std::string(text.substr(kCustomPrefix.size())));
  }
  throw SchemaError("unknown environment \"" + std::string(text) + "\"");
}

std::string Environment::str() const {
  switch (kind) {
    case Kind::kNormalOperation: return "normal_operation";
    case Kind::kOverload: return "overload";
    case Kind::kStartup: return "startup";
    case Kind::kDevelopmentTime: return "development_time";
    case Kind::kCustom: return std::string(kCustomPrefix) + custom_name;
  }
  return {};
}

TransformSpec::Kind TransformSpec::parse_kind(std::string_view text) {
  if (text == "none") return Kind::kNone;
  if (text == "blur") return Kind::kBlur;
  if (text == "channel_drop") return Kind::kChannelDrop;
  if (text == "input_failure") return Kind::kInputFailure;
  throw SchemaError("unknown transform kind \"" + std::string(text) + "\"");
}

std::string_view TransformSpec::kind_name(Kind kind) {
  switch (kind) {
    case Kind::kNone: return "none";
    case Kind::kBlur: return "blur";
    case Kind::kChannelDrop: return "channel_drop";
    case Kind::kInputFailure: return "input_failure";
  }
  return "none";
}

void check_transform(const TransformSpec& t, const std::string& prefix, ValidationReport& out) {
  switch (t.kind) {
    case TransformSpec::Kind::kNone:
      break;
    case TransformSpec::Kind::kBlur:
      if (t.sigmas.size() != 3) {
        out.push_back({prefix + ".sigmas", "blur needs exactly three levels (minimal, intermediate, maximal)"});
      }
      for (std::size_t i = 0; i < t.sigmas.size(); ++i) {
        if (!(t.sigmas[i] > 0.0) || !std::isfinite(t.sigmas[i])) {
          out.push_back({prefix + ".sigmas[" + std::to_string(i) + "]", "sigma must be > 0"});
        } else if (i > 0 && !(t.sigmas[i] > t.sigmas[i - 1])) {
          out.push_back({prefix + ".sigmas[" + std::to_string(i) + "]", "sigmas must be strictly increasing"});
        }
      }
      break;
    case TransformSpec::Kind::kChannelDrop: {
      if (t.channels.empty()) out.push_back({prefix + ".channels", "at least one channel required"});
      std::set<int> seen;
      for (std::size_t i = 0; i < t.channels.size(); ++i) {
        const int c = t.channels[i];
        const std::string field = prefix + ".channels[" + std::to_string(i) + "]";
        if (c < 0 || c > 2) {
          out.push_back({field, "channel must be 0, 1 or 2"});
        } else if (!seen.insert(c).second) {
          out.push_back({field, "duplicate channel " + std::to_string(c)});
        }
      }
      break;
    }
    case TransformSpec::Kind::kInputFailure:
      if (!(t.probability >= 0.0 && t.probability <= 1.0)) {
        out.push_back({prefix + ".probability", "probability must be in [0, 1]"});
      }
      break;
  }
}

void check_data_spec(const DataSpec& d, const std::string& prefix, bool require_manifest,
                     ValidationReport& out) {
  if (require_manifest && d.manifest_path.empty()) {
    out.push_back({prefix + ".manifest", "manifest path is empty"});
  }
  for (std::size_t i = 0; i < d.required_groups.size(); ++i) {
    if (!is_group_name(d.required_groups[i])) {
      out.push_back({prefix + ".required_groups[" + std::to_string(i) + "]",
                     "group name must match [a-z_]+"});
    }
  }
  if (!d.group_weights.empty()) {
    double sum = 0.0;
    for (const auto& [group, w] : d.group_weights) {
      if (!is_group_name(group)) {
        out.push_back({prefix + ".group_weights." + group, "group name must match [a-z_]+"});
      }
      if (!(w >= 0.0) || !std::isfinite(w)) {
        out.push_back({prefix + ".group_weights." + group, "weight must be >= 0"});
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      out.push_back({prefix + ".group_weights", "weights sum to " + format_number(sum) + ", expected 1"});
    }
  }
  if (!(d.representativeness_tolerance > 0.0 && d.representativeness_tolerance < 1.0)) {
    out.push_back({prefix + ".representativeness_tolerance", "tolerance must be in (0, 1)"});
  }
}

void check_context(const ContextSpec& c, const std::string& prefix, ValidationReport& out) {
  if (c.environment.kind == Environment::Kind::kCustom && c.environment.custom_name.empty()) {
    out.push_back({"environment", "custom environment needs a name"});
  }
  if (c.arrival_rate_hz && !(*c.arrival_rate_hz > 0.0 && std::isfinite(*c.arrival_rate_hz))) {
    out.push_back({prefix + ".arrival_rate_hz", "arrival rate must be positive"});
  }
  if (c.input_failure_prob && !(*c.input_failure_prob >= 0.0 && *c.input_failure_prob <= 1.0)) {
    out.push_back({prefix + ".input_failure_prob", "probability must be in [0, 1]"});
  }
}

const std::vector<MeasurementInfo>& measurement_registry() {
  static const std::vector<MeasurementInfo> registry = {
      {"accuracy", {"accuracy.overall"}, {}, "Plain accuracy over the test dataset."},
      {"group_accuracy",
       {"accuracy.overall", "accuracy.min_group", "accuracy.group.*"},
       {},
       "Accuracy per population group of the manifest, plus the minimum over groups."},
      {"rank_sum",
       {"wilcoxon.p_two_sided", "wilcoxon.p_two_sided.*", "wilcoxon.u_statistic.*",
        "accuracy.perturbed.*"},
       {},
       "Wilcoxon rank-sum test of correctness on original vs each perturbed dataset. "
       "wilcoxon.p_two_sided is the smallest p over all levels."},
      {"resource_monitor",
       {"cpu.max_percent", "cpu.mean_percent", "memory.peak_bytes", "resource.sample_count"},
       {},
       "Samples CPU and resident memory of the model process while it serves the dataset."},
      {"disk_usage", {"disk.total_bytes"}, {"path"}, "Sum of regular-file sizes under a path."},
      {"evidence_check",
       {"evidence.present_rate", "evidence.finite_rate"},
       {},
       "Requests evidence with every inference and checks presence, shape and finiteness."},
  };
  return registry;
}

const MeasurementInfo* find_measurement(std::string_view id) {
  for (const auto& m : measurement_registry()) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

const std::vector<std::string>& harness_metric_paths() {
  static const std::vector<std::string> paths = {
      "inference.request_count", "inference.error_count", "input_failure.injected_count"};
  return paths;
}

bool metric_pattern_matches(std::string_view pattern, std::string_view path) {
  if (pattern.ends_with(".*")) {
    const std::string_view stem = pattern.substr(0, pattern.size() - 1);
    if (!path.starts_with(stem)) return false;
    const std::string_view rest = path.substr(stem.size());
    return !rest.empty() && rest.find('.') == std::string_view::npos;
  }
  return pattern == path;
}

std::optional<std::string> find_producer(const std::string& path,
                                         const std::vector<MeasurementSpec>& measurements) {
  for (const auto& h : harness_metric_paths()) {
    if (h == path) return std::string("harness");
  }
  for (const auto& spec : measurements) {
    const MeasurementInfo* info = find_measurement(spec.id);
    if (info == nullptr) continue;
    for (const auto& pattern : info->produces) {
      if (metric_pattern_matches(pattern, path)) return spec.id;
    }
  }
  return std::nullopt;
}

std::vector<std::string> transform_level_names(const TransformSpec& t) {
  static constexpr const char* kBlurLevels[] = {"minimal", "intermediate", "maximal"};
  static constexpr const char* kChannels[] = {"red", "green", "blue"};
  std::vector<std::string> names;
  switch (t.kind) {
    case TransformSpec::Kind::kNone:
      names.push_back("none");
      break;
    case TransformSpec::Kind::kBlur:
      for (std::size_t i = 0; i < t.sigmas.size() && i < 3; ++i) {
        names.push_back(std::string("blur_") + kBlurLevels[i]);
      }
      break;
    case TransformSpec::Kind::kChannelDrop:
      for (int c : t.channels) {
        if (c >= 0 && c <= 2) names.push_back(std::string("channel_drop_") + kChannels[c]);
      }
      break;
    case TransformSpec::Kind::kInputFailure:
      names.push_back("input_failure");
      break;
  }
  return names;
}

}  // namespace qase
