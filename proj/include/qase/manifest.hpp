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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qase/binding.hpp"

namespace qase {

struct ManifestEntry {
  std::string path;  // relative to the manifest's directory, or absolute
  std::string label;
  std::string group;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

// Which transform produced a derived manifest, and with what parameter.
struct AppliedTransform {
  TransformSpec::Kind kind = TransformSpec::Kind::kNone;
  std::string level;  // metric path segment, e.g. "blur_minimal"
  double sigma = 0.0;
  int channel = -1;
  double probability = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const AppliedTransform&, const AppliedTransform&) = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::optional<std::string> derived_from;
  std::optional<AppliedTransform> transform;
  // Directory entry paths resolve against; not serialized.
  std::filesystem::path base_dir;
  // File the manifest was loaded from, when any; not serialized.
  std::filesystem::path source_path;

  std::filesystem::path resolve(const ManifestEntry& e) const;
  // Counts per group, sorted by group name.
  std::map<std::string, std::size_t> group_counts() const;
};

nlohmann::json to_json(const Manifest& m);
Manifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& m, const std::filesystem::path& path);

// Fraction of entries per group compared with expected weights. A group is
// representative when |actual - expected| <= tolerance * expected.
struct RepresentativenessReport {
  std::map<std::string, double> actual;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
RepresentativenessReport check_representativeness(const Manifest& m, const std::map<std::string, double>& weights,
                                                  double tolerance);

struct DerivedDataset {
  std::string level;
  std::filesystem::path manifest_path;
  Manifest manifest;
};

// Writes one derived dataset per transform level under
// `output_dir/<level>/` (images plus manifest.json) and returns them in level
// order. Output is a pure function of the inputs and `seed` (used only by
// input_failure). Throws ImageError naming any unreadable source image.
std::vector<DerivedDataset> generate_perturbation_suite(const Manifest& manifest, const TransformSpec& spec,
                                                        const std::filesystem::path& output_dir,
                                                        std::uint64_t seed = 0);

// Uniform double in [0, 1) from a 64-bit generator output, identical on every
// platform.
double unit_interval(std::uint64_t bits);

}  // namespace qase
