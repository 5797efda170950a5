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
#include <cmath>

#include "qase/adapter.hpp"
#include "qase/error.hpp"
#include "qase/image.hpp"
#include "qase/json_io.hpp"

namespace qase {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view evidence_name(StubConfig::Evidence e) {
  switch (e) {
    case StubConfig::Evidence::kFull: return "full";
    case StubConfig::Evidence::kNone: return "none";
    case StubConfig::Evidence::kMismatch: return "mismatch";
  }
  return "full";
}

}  // namespace

std::string normalized_input_path(const std::filesystem::path& p) {
  return std::filesystem::absolute(p).lexically_normal().string();
}

json to_json(const StubConfig& c) {
  json j;
  j["default_accuracy"] = c.default_accuracy;
  j["group_accuracy"] = c.group_accuracy;
  j["transform_accuracy"] = c.transform_accuracy;
  j["evidence"] = std::string(evidence_name(c.evidence));
  j["cpu_percent"] = c.cpu_percent;
  j["rss_bytes"] = c.rss_bytes;
  j["seed"] = c.seed;
  return j;
}

StubConfig stub_config_from_json(const json& j) {
  FieldReader r(j, "stub");
  StubConfig c;
  if (auto v = r.optional_number("default_accuracy")) c.default_accuracy = *v;
  for (const char* key : {"group_accuracy", "transform_accuracy"}) {
    if (const json* m = r.optional(key)) {
      if (!m->is_object()) throw SchemaError(r.field(key) + ": expected an object");
      auto& target = std::string_view(key) == "group_accuracy" ? c.group_accuracy : c.transform_accuracy;
      for (const auto& [k, v] : m->items()) {
        if (!v.is_number()) throw SchemaError(r.field(key) + "." + k + ": expected a number");
        target[k] = v.get<double>();
      }
    }
  }
  if (auto e = r.optional_string("evidence")) {
    if (*e == "full") {
      c.evidence = StubConfig::Evidence::kFull;
    } else if (*e == "none") {
      c.evidence = StubConfig::Evidence::kNone;
    } else if (*e == "mismatch") {
      c.evidence = StubConfig::Evidence::kMismatch;
    } else {
      throw SchemaError("stub.evidence: expected full, none or mismatch");
    }
  }
  if (auto v = r.optional_number("cpu_percent")) c.cpu_percent = *v;
  if (auto v = r.optional_number("rss_bytes")) c.rss_bytes = static_cast<std::int64_t>(*v);
  if (const json* s = r.optional("seed")) c.seed = s->get<std::uint64_t>();
  r.finish();
  return c;
}

void StubAdapter::bind_dataset(const Manifest& manifest) {
  std::map<std::string, std::vector<std::size_t>> by_group;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) by_group[manifest.entries[i].group].push_back(i);

  for (auto& [group, indices] : by_group) {
    double acc = config_.default_accuracy;
    if (auto it = config_.group_accuracy.find(group); it != config_.group_accuracy.end()) acc = it->second;
    if (manifest.transform) {
      const auto& t = *manifest.transform;
      if (auto it = config_.transform_accuracy.find(t.level); it != config_.transform_accuracy.end()) {
        acc = it->second;
      } else if (auto kt = config_.transform_accuracy.find(std::string(TransformSpec::kind_name(t.kind)));
                 kt != config_.transform_accuracy.end()) {
        acc = kt->second;
      }
    }
    const auto n = static_cast<long long>(indices.size());
    const long long k = std::clamp(std::llround(std::clamp(acc, 0.0, 1.0) * static_cast<double>(n)), 0LL, n);

    // Fisher-Yates with a generator fixed by (seed, group) only, so clean and
    // perturbed copies of a dataset share the same ordering.
    std::uint64_t state = splitmix64(config_.seed ^ fnv1a(group));
    for (std::size_t i = indices.size(); i > 1; --i) {
      state = splitmix64(state);
      std::swap(indices[i - 1], indices[state % i]);
    }
    for (long long pos = 0; pos < n; ++pos) {
      const ManifestEntry& e = manifest.entries[indices[pos]];
      truth_[normalized_input_path(manifest.resolve(e))] = {e.label, pos < k};
    }
  }
}

InferenceResponse StubAdapter::infer(const InferenceRequest& request) {
  ++served_;
  InferenceResponse response;
  response.request_id = request.request_id;
  if (request.inline_input) {
    response.error = "inline input is not supported by the stub";
    return response;
  }
  Image image;
  try {
    image = load_ppm(request.input_path);
  } catch (const ImageError& e) {
    response.error = std::string("unreadable input: ") + e.what();
    return response;
  }

  const auto it = truth_.find(normalized_input_path(request.input_path));
  if (it == truth_.end()) {
    response.label = "unknown";
  } else {
    response.label = it->second.correct ? it->second.label : it->second.label + "_misidentified";
  }

  if (request.want_evidence && config_.evidence != StubConfig::Evidence::kNone) {
    Evidence ev;
    ev.height = image.height() + (config_.evidence == StubConfig::Evidence::kMismatch ? 1 : 0);
    ev.width = image.width();
    const std::size_t n = static_cast<std::size_t>(ev.height) * ev.width;
    ev.values.assign(n, 1.0 / static_cast<double>(n));
    response.evidence = std::move(ev);
  }
  return response;
}

std::optional<ResourceSeries> StubAdapter::simulated_resources() const {
  ResourceSeries series;
  series.sample_interval_ms = 100;
  for (int i = 1; i <= 10; ++i) {
    series.samples.push_back({100.0 * i, config_.cpu_percent, config_.rss_bytes});
  }
  return series;
}

}  // namespace qase
