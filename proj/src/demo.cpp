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

#include "qase/demo.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <random>

#include "qase/image.hpp"
#include "qase/manifest.hpp"
#include "qase/mapping.hpp"
#include "qase/scenario.hpp"

namespace qase {

namespace {

namespace fs = std::filesystem;

struct Species {
  const char* label;
  std::array<int, 3> colour;
};

constexpr std::array<Species, 3> kSpecies = {{
    {"rose", {200, 40, 50}},
    {"fern", {40, 160, 60}},
    {"iris", {70, 60, 190}},
}};

constexpr std::array<const char*, 3> kGroups = {"rose_garden", "succulent_garden", "herb_garden"};

Image flower(const Species& s, std::mt19937_64& rng) {
  Image img(8, 8);
  std::uniform_int_distribution<int> noise(-30, 30);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(s.colour[c] + noise(rng), 0, 255));
      }
    }
  }
  return img;
}

void write_bytes(const fs::path& p, std::size_t n) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  for (std::size_t i = 0; i < n; ++i) out.put(static_cast<char>(i % 251));
}

}  // namespace

DemoLayout write_demo(const fs::path& root, int per_group) {
  DemoLayout d;
  d.root = root;
  fs::create_directories(root / "data" / "images");
  fs::create_directories(root / "model");

  std::mt19937_64 rng(7);
  Manifest m;
  m.base_dir = root / "data";
  for (const char* group : kGroups) {
    for (int i = 0; i < per_group; ++i) {
      const Species& s = kSpecies[static_cast<std::size_t>(i) % kSpecies.size()];
      char name[64];
      std::snprintf(name, sizeof(name), "images/%s_%03d.ppm", group, i);
      save_ppm(flower(s, rng), m.base_dir / name);
      m.entries.push_back({name, s.label, group});
    }
  }
  d.manifest = root / "data" / "manifest.json";
  save_manifest(m, d.manifest);

  d.model_dir = root / "model";
  write_bytes(d.model_dir / "weights.bin", 100);
  write_bytes(d.model_dir / "labels.bin", 200);

  const std::vector<std::string> groups(kGroups.begin(), kGroups.end());
  std::vector<QAScenario> scenarios;
  NegotiationCard card;
  card.system_context = "Flower identification app for visitors of a botanical garden, running on loaned handhelds.";
  card.goals = {"Name the flower in a visitor photo.", "Explain which parts of the photo drove the answer."};
  const Catalog catalog = Catalog::builtin();
  for (const auto& entry : catalog.entries()) {
    QAScenario s = entry.instantiate("data/manifest.json", "model", groups);
    const fs::path path = root / (s.id + ".scenario");
    save_scenario(s, path);
    d.scenarios.push_back(path);
    card.scenario_ids.push_back(s.id);
    if (std::find(card.priorities.begin(), card.priorities.end(), s.quality_attribute) == card.priorities.end()) {
      card.priorities.push_back(s.quality_attribute);
    }
    scenarios.push_back(std::move(s));
  }
  card.tradeoff_notes = "Fairness across garden sections outranks raw speed.";
  d.card = root / "card.json";
  save_card(card, d.card);

  d.plan = root / "demo.plan";
  save_plan(build_test_plan(scenarios), d.plan);
  return d;
}

}  // namespace qase
