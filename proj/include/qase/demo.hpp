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
#include <string>
#include <vector>

namespace qase {

struct DemoLayout {
  std::filesystem::path root;
  std::filesystem::path manifest;  // data/manifest.json
  std::filesystem::path model_dir;
  std::vector<std::filesystem::path> scenarios;
  std::filesystem::path card;
  std::filesystem::path plan;
};

// Writes a self-contained example under `root`: 300 small PPM images in
// three garden groups, a 300-byte model directory, one scenario per built-in
// catalog entry, a negotiation card and the mapped plan (demo.plan).
// Scenario paths are relative to `root`. Output is byte-identical across
// calls apart from the plan's created_at.
DemoLayout write_demo(const std::filesystem::path& root, int per_group = 100);

}  // namespace qase
