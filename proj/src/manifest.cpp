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

#include "qase/manifest.hpp"

#include <cmath>
#include <iostream>
#include <random>

#include "qase/error.hpp"
#include "qase/image.hpp"
#include "qase/json_io.hpp"
#include "qase/metrics.hpp"
#include "qase/scenario.hpp"

namespace qase {

using nlohmann::json;

namespace {

json applied_to_json(const AppliedTransform& t) {
  json j;
  j["kind"] = std::string(TransformSpec::kind_name(t.kind));
  j["level"] = t.level;
  switch (t.kind) {
    case TransformSpec::Kind::kBlur: j["sigma"] = t.sigma; break;
    case TransformSpec::Kind::kChannelDrop: j["channel"] = t.channel; break;
    case TransformSpec::Kind::kInputFailure:
      j["probability"] = t.probability;
      j["seed"] = t.seed;
      break;
    case TransformSpec::Kind::kNone: break;
  }
  return j;
}

AppliedTransform applied_from_json(const json& j) {
  FieldReader r(j, "transform");
  AppliedTransform t;
  t.kind = TransformSpec::parse_kind(r.string("kind"));
  t.level = r.string("level");
  if (auto v = r.optional_number("sigma")) t.sigma = *v;
  if (auto v = r.optional_number("channel")) t.channel = static_cast<int>(*v);
  if (auto v = r.optional_number("probability")) t.probability = *v;
  if (const json* s = r.optional("seed")) t.seed = s->get<std::uint64_t>();
  r.finish();
  return t;
}

std::string file_tag(const AppliedTransform& t) {
  switch (t.kind) {
    case TransformSpec::Kind::kBlur: return "blur_s" + format_number(t.sigma);
    case TransformSpec::Kind::kChannelDrop: return "drop_c" + std::to_string(t.channel);
    case TransformSpec::Kind::kInputFailure: return "fail_p" + format_number(t.probability);
    case TransformSpec::Kind::kNone: return "copy";
  }
  return "copy";
}

std::vector<AppliedTransform> expand_levels(const TransformSpec& spec, std::uint64_t seed) {
  const std::vector<std::string> names = transform_level_names(spec);
  std::vector<AppliedTransform> levels;
  switch (spec.kind) {
    case TransformSpec::Kind::kBlur: {
      const BlurLevelSet set = spec.sigmas.size() == 3 ? BlurLevelSet(spec.sigmas[0], spec.sigmas[1], spec.sigmas[2])
                                                       : throw ImageError("blur needs exactly three sigmas");
      for (std::size_t i = 0; i < 3; ++i) {
        AppliedTransform t;
        t.kind = spec.kind;
        t.level = names[i];
        t.sigma = set[i];
        levels.push_back(t);
      }
      break;
    }
    case TransformSpec::Kind::kChannelDrop:
      for (std::size_t i = 0; i < spec.channels.size(); ++i) {
        if (spec.channels[i] < 0 || spec.channels[i] > 2) {
          throw ImageError("channel " + std::to_string(spec.channels[i]) + " out of range");
        }
        AppliedTransform t;
        t.kind = spec.kind;
        t.level = names[i];
        t.channel = spec.channels[i];
        levels.push_back(t);
      }
      break;
    case TransformSpec::Kind::kInputFailure: {
      AppliedTransform t;
      t.kind = spec.kind;
      t.level = names[0];
      t.probability = spec.probability;
      t.seed = seed;
      levels.push_back(t);
      break;
    }
    case TransformSpec::Kind::kNone: {
      AppliedTransform t;
      t.level = names[0];
      levels.push_back(t);
      break;
    }
  }
  return levels;
}

}  // namespace

std::filesystem::path Manifest::resolve(const ManifestEntry& e) const {
  const std::filesystem::path p(e.path);
  return p.is_absolute() ? p : base_dir / p;
}

std::map<std::string, std::size_t> Manifest::group_counts() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& e : entries) ++counts[e.group];
  return counts;
}

json to_json(const Manifest& m) {
  json j;
  j["entries"] = json::array();
  for (const auto& e : m.entries) j["entries"].push_back({{"path", e.path}, {"label", e.label}, {"group", e.group}});
  if (m.derived_from) j["derived_from"] = *m.derived_from;
  if (m.transform) j["transform"] = applied_to_json(*m.transform);
  return j;
}

Manifest manifest_from_json(const json& j, const std::filesystem::path& base_dir) {
  FieldReader r(j, "");
  Manifest m;
  m.base_dir = base_dir;
  const json& entries = r.required("entries");
  if (!entries.is_array()) throw SchemaError("entries: expected an array");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    FieldReader e(entries[i], "entries[" + std::to_string(i) + "]");
    m.entries.push_back({e.string("path"), e.string("label"), e.string("group")});
    e.finish();
  }
  m.derived_from = r.optional_string("derived_from");
  if (const json* t = r.optional("transform")) m.transform = applied_from_json(*t);
  r.finish();
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    Manifest m = manifest_from_json(j, path.parent_path());
    m.source_path = path;
    return m;
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) { write_json_file(path, to_json(m)); }

RepresentativenessReport check_representativeness(const Manifest& m, const std::map<std::string, double>& weights,
                                                  double tolerance) {
  RepresentativenessReport report;
  const double n = static_cast<double>(m.entries.size());
  const auto counts = m.group_counts();
  for (const auto& [group, expected] : weights) {
    const auto it = counts.find(group);
    const double actual = (it == counts.end() || n == 0.0) ? 0.0 : static_cast<double>(it->second) / n;
    report.actual[group] = actual;
    if (std::abs(actual - expected) > tolerance * expected) {
      report.violations.push_back("group " + group + " fraction " + format_number(actual) + " vs expected " +
                                  format_number(expected) + " (tolerance " + format_number(tolerance) + ")");
    }
  }
  return report;
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::vector<DerivedDataset> generate_perturbation_suite(const Manifest& manifest, const TransformSpec& spec,
                                                        const std::filesystem::path& output_dir,
                                                        std::uint64_t seed) {
  const std::vector<AppliedTransform> levels = expand_levels(spec, seed);
  if (manifest.entries.empty()) {
    std::cerr << "warning: perturbation suite over an empty manifest\n";
  }

  std::vector<DerivedDataset> out;
  for (const AppliedTransform& level : levels) {
    const std::filesystem::path dir = output_dir / level.level;
    std::filesystem::create_directories(dir);
    Manifest derived;
    derived.base_dir = dir;
    derived.transform = level;
    derived.derived_from = !manifest.source_path.empty() ? manifest.source_path.string()
                           : manifest.base_dir.empty()   ? std::string("<memory>")
                                                         : manifest.base_dir.string();

    std::mt19937_64 rng(level.seed);
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
      const ManifestEntry& src = manifest.entries[i];
      const std::filesystem::path src_path = manifest.resolve(src);
      char index[16];
      std::snprintf(index, sizeof(index), "%05zu", i);
      const std::string name =
          std::string(index) + "_" + src_path.stem().string() + "__" + file_tag(level) + ".ppm";
      const std::filesystem::path dst = dir / name;

      if (level.kind == TransformSpec::Kind::kInputFailure) {
        if (!std::filesystem::is_regular_file(src_path)) {
          throw ImageError("perturbation suite aborted at " + src_path.string() + ": not a readable file");
        }
        // One draw per entry keeps the failure pattern independent of file contents.
        const bool corrupt = unit_interval(rng()) < level.probability;
        if (corrupt) {
          write_truncated_copy(src_path, dst);
        } else {
          std::filesystem::copy_file(src_path, dst, std::filesystem::copy_options::overwrite_existing);
        }
      } else {
        Image image;
        try {
          image = load_ppm(src_path);
        } catch (const ImageError& e) {
          throw ImageError("perturbation suite aborted at " + src_path.string() + ": " + e.what());
        }
        switch (level.kind) {
          case TransformSpec::Kind::kBlur: image = gaussian_blur(image, level.sigma); break;
          case TransformSpec::Kind::kChannelDrop: image = drop_channel(image, level.channel); break;
          default: break;
        }
        save_ppm(image, dst);
      }
      derived.entries.push_back({name, src.label, src.group});
    }
    const std::filesystem::path manifest_path = dir / "manifest.json";
    save_manifest(derived, manifest_path);
    out.push_back({level.level, manifest_path, std::move(derived)});
  }
  return out;
}

}  // namespace qase
