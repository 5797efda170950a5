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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "gtest/gtest.h"
#include "qase/json_io.hpp"
#include "qase/scenario.hpp"
#include "test_util.hpp"

namespace qase {
namespace {

using testing_util::TempDir;

struct Outcome {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell with stderr folded into stdout.
Outcome cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(QASE_CLI) + "' " + args + " 2>&1";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) o.out.append(buf.data(), n);
  const int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const Outcome o = cli("demo --out " + q(dir_ / "demo"));
    ASSERT_EQ(o.code, 0) << o.out;
  }
  std::filesystem::path demo() const { return dir_ / "demo"; }
  std::string plan_id() const { return read_json_file(demo() / "demo.plan")["id"]; }

  TempDir dir_;
};

TEST_F(Cli, ValidateDemoScenarios) {
  const Outcome o = cli("validate " + q(demo() / "robustness-blur.scenario") + " " +
                        q(demo() / "fairness-photo-location.scenario") + " --card " + q(demo() / "card.json"));
  EXPECT_EQ(o.code, 1) << o.out;  // the card names five scenarios, two given
  EXPECT_NE(o.out.find("unresolved scenario performance-loaned-device"), std::string::npos) << o.out;
  std::string all;
  for (const auto& e : std::filesystem::directory_iterator(demo())) {
    if (e.path().extension() == ".scenario") all += " " + q(e.path());
  }
  EXPECT_EQ(cli("validate" + all + " --card " + q(demo() / "card.json")).code, 0);
}

TEST_F(Cli, ValidateReportsViolations) {
  QAScenario s = load_scenario(demo() / "robustness-blur.scenario");
  s.stimulus.clear();
  save_scenario(s, dir_ / "bad.scenario");
  const Outcome o = cli("validate " + q(dir_ / "bad.scenario"));
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.out.find("stimulus: must not be empty"), std::string::npos) << o.out;

  std::ofstream(dir_ / "broken.scenario") << "{\"id\": ";
  EXPECT_EQ(cli("validate " + q(dir_ / "broken.scenario")).code, 2);
}

TEST_F(Cli, RunTwiceGivesIdenticalSummaries) {
  const std::string plan = q(demo() / "demo.plan");
  const Outcome a = cli("run " + plan + " --stub --seed 7 --store " + q(dir_ / "s1"));
  const Outcome b = cli("run " + plan + " --stub --seed 7 --store " + q(dir_ / "s2"));
  ASSERT_EQ(a.code, 0) << a.out;
  ASSERT_EQ(b.code, 0) << b.out;
  const auto rel = std::filesystem::path("plans") / plan_id() / "summary.json";
  EXPECT_EQ(read_text_file(dir_ / "s1" / rel), read_text_file(dir_ / "s2" / rel));
}

TEST_F(Cli, FailingRunExitsOne) {
  write_json_file(dir_ / "stub.json", {{"group_accuracy", {{"herb_garden", 0.5}}}});
  const Outcome o = cli("run " + q(demo() / "demo.plan") + " --stub --stub-config " + q(dir_ / "stub.json") +
                        " --store " + q(dir_ / "s"));
  EXPECT_EQ(o.code, 1) << o.out;
  EXPECT_NE(o.out.find("FAIL  tc-fairness-photo-location"), std::string::npos) << o.out;
}

TEST_F(Cli, StoreFromEnvironmentAndReport) {
  const std::string env = "QASE_STORE=" + q(dir_ / "envstore");
  ASSERT_EQ(cli("run " + q(demo() / "demo.plan") + " --stub --seed 7", env).code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "envstore" / "plans" / plan_id() / "report.md"));
  const Outcome r = cli("report " + plan_id(), env);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("## robustness-channel-loss"), std::string::npos);
  EXPECT_EQ(cli("report plan-000000000000", env).code, 2);
}

TEST_F(Cli, ExternalAdapter) {
  const Outcome o = cli("run " + q(demo() / "demo.plan") + " --adapter \"'" + std::string(QASE_FIXTURE_CHILD) +
                        "' adapter evidence\" --store " + q(dir_ / "s"));
  // The fixture names every flower "rose", so fairness fails; the evidence
  // contract and disk bound hold.
  EXPECT_EQ(o.code, 1) << o.out;
  EXPECT_NE(o.out.find("PASS  tc-interpretability-evidence"), std::string::npos) << o.out;
}

TEST_F(Cli, PlanCommand) {
  const Outcome o = cli("plan " + q(demo() / "robustness-blur.scenario") + " -o " + q(dir_ / "p.plan"));
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_EQ(read_json_file(dir_ / "p.plan")["cases"].size(), 1u);
}

TEST(CliStandalone, CatalogByAttribute) {
  const Outcome o = cli("catalog --attribute robustness");
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("robustness-blur"), std::string::npos);
  EXPECT_NE(o.out.find("robustness-channel-loss"), std::string::npos);
  EXPECT_EQ(o.out.find("fairness"), std::string::npos);
  EXPECT_EQ(cli("catalog --attribute speed").code, 2);
}

TEST(CliStandalone, PerturbCommand) {
  TempDir dir;
  testing_util::write_dataset(dir / "d", {"rose_garden"}, 4);
  const Outcome o = cli("perturb " + q(dir / "d/manifest.json") + " --blur 1,2,4 --out " + q(dir / "blur"));
  EXPECT_EQ(o.code, 0) << o.out;
  for (const char* level : {"blur_minimal", "blur_intermediate", "blur_maximal"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "blur" / level / "manifest.json")) << level;
  }
  EXPECT_EQ(cli("perturb " + q(dir / "d/manifest.json") + " --drop-channels --out " + q(dir / "drop")).code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "drop" / "channel_drop_blue" / "manifest.json"));
  EXPECT_EQ(cli("perturb " + q(dir / "d/manifest.json") + " --blur 4,2,1 --out " + q(dir / "x")).code, 2);
  EXPECT_EQ(cli("perturb " + q(dir / "d/manifest.json") + " --out " + q(dir / "x")).code, 2);
}

TEST(CliStandalone, UsageErrors) {
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("catalog --bogus").code, 2);
  EXPECT_EQ(cli("validate /nonexistent.scenario").code, 2);
  TempDir dir;
  std::ofstream(dir / "x.plan") << "{}";
  EXPECT_EQ(cli("run " + q(dir / "x.plan")).code, 2);
  EXPECT_EQ(cli("run " + q(dir / "x.plan") + " --stub --store " + q(dir / "s")).code, 2);
}

}  // namespace
}  // namespace qase
