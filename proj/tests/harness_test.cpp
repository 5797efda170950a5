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
#include <spawn.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "gtest/gtest.h"
#include "qase/adapter.hpp"
#include "qase/context.hpp"
#include "qase/error.hpp"
#include "qase/mapping.hpp"
#include "qase/protocol.hpp"
#include "qase/resources.hpp"
#include "qase/runner.hpp"
#include "test_util.hpp"

extern char** environ;

namespace qase {
namespace {

using testing_util::TempDir;
using Clock = std::chrono::steady_clock;

const std::vector<std::string> kGroups = {"rose_garden", "succulent_garden", "herb_garden"};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::unique_ptr<ProcessAdapter> fixture_adapter(const std::string& behaviour, const std::string& arg = "",
                                                ProcessAdapter::Options options = {}) {
  std::vector<std::string> args = {"adapter", behaviour};
  if (!arg.empty()) args.push_back(arg);
  return ProcessAdapter::spawn(QASE_FIXTURE_CHILD, args, {}, options);
}

pid_t spawn_fixture(const std::vector<std::string>& args) {
  std::vector<std::string> all = {QASE_FIXTURE_CHILD};
  all.insert(all.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : all) argv.push_back(a.data());
  argv.push_back(nullptr);
  pid_t pid = -1;
  if (posix_spawn(&pid, argv[0], nullptr, nullptr, argv.data(), environ) != 0) return -1;
  return pid;
}

int reap(pid_t pid) {
  int status = 0;
  waitpid(pid, &status, 0);
  return status;
}

// --- wire protocol --------------------------------------------------------

TEST(Protocol, HandshakeAndShutdownAreBitExact) {
  EXPECT_EQ(handshake_line(), R"({"protocol":"qase-adapter/1"})");
  EXPECT_EQ(shutdown_line(), R"({"cmd":"shutdown"})");
  EXPECT_NO_THROW(check_handshake(R"({"protocol": "qase-adapter/1"})"));
  EXPECT_THROW(check_handshake(R"({"protocol":"qase-adapter/2"})"), ProtocolError);
  EXPECT_THROW(check_handshake("hello"), ProtocolError);
}

TEST(Protocol, RequestRoundTrip) {
  InferenceRequest r{"r7", "/data/x.ppm", std::nullopt, true};
  const InferenceRequest back = decode_request(encode_request(r));
  EXPECT_EQ(back.request_id, "r7");
  EXPECT_EQ(back.input_path, "/data/x.ppm");
  EXPECT_TRUE(back.want_evidence);
  EXPECT_EQ(encode_request(r).find('\n'), std::string::npos);
}

TEST(Protocol, ResponseRoundTripWithNonFiniteEvidence) {
  InferenceResponse r;
  r.request_id = "a";
  r.label = "rose";
  r.evidence = Evidence{1, 2, {0.5, std::nan("")}};
  const InferenceResponse back = decode_response(encode_response(r));
  EXPECT_EQ(back.label, "rose");
  ASSERT_TRUE(back.evidence);
  EXPECT_TRUE(back.evidence->shape_consistent());
  EXPECT_FALSE(back.evidence->all_finite());
  EXPECT_TRUE(std::isnan(back.evidence->values[1]));
}

TEST(Protocol, ResponseNeedsExactlyOneOfLabelAndError) {
  EXPECT_THROW(decode_response(R"({"request_id":"a"})"), ProtocolError);
  EXPECT_THROW(decode_response(R"({"request_id":"a","label":"x","error":"y"})"), ProtocolError);
  EXPECT_THROW(decode_response(R"({"label":"x"})"), ProtocolError);
  EXPECT_THROW(decode_response(R"({"request_id": )"), ProtocolError);
  EXPECT_EQ(decode_response(R"({"request_id":"a","error":"boom"})").error, "boom");
}

// --- conformance: the same checks for the in-process stub and a child --------

void check_conformance(ModelAdapter& adapter, const Manifest& m, const std::filesystem::path& bad_input) {
  adapter.bind_dataset(m);
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    InferenceRequest req{"c" + std::to_string(i), m.resolve(m.entries[i]).string(), std::nullopt, true};
    const InferenceResponse resp = adapter.infer(req);
    ASSERT_EQ(resp.request_id, req.request_id);
    ASSERT_TRUE(resp.label.has_value());
    ASSERT_FALSE(resp.error.has_value());
    ASSERT_TRUE(resp.evidence.has_value());
    EXPECT_EQ(resp.evidence->height, 3);
    EXPECT_EQ(resp.evidence->width, 4);
    EXPECT_TRUE(resp.evidence->shape_consistent());
    EXPECT_TRUE(resp.evidence->all_finite());
  }
  const InferenceResponse no_evidence = adapter.infer({"plain", m.resolve(m.entries[0]).string(), std::nullopt, false});
  EXPECT_FALSE(no_evidence.evidence.has_value());
  const InferenceResponse bad = adapter.infer({"bad", bad_input.string(), std::nullopt, true});
  EXPECT_EQ(bad.request_id, "bad");
  EXPECT_TRUE(bad.error.has_value());
  EXPECT_FALSE(bad.label.has_value());
  const InferenceResponse after = adapter.infer({"after", m.resolve(m.entries[1]).string(), std::nullopt, false});
  EXPECT_TRUE(after.label.has_value());
  adapter.shutdown();
}

TEST(Conformance, StubAdapter) {
  TempDir dir;
  const Manifest m = testing_util::write_dataset(dir / "d", {"rose_garden"}, 5);
  StubAdapter stub(StubConfig{});
  check_conformance(stub, m, dir / "missing.ppm");
}

TEST(Conformance, ChildProcessAdapter) {
  TempDir dir;
  const Manifest m = testing_util::write_dataset(dir / "d", {"rose_garden"}, 5);
  auto child = fixture_adapter("evidence");
  check_conformance(*child, m, dir / "missing.ppm");
  EXPECT_FALSE(child->running());
  EXPECT_EQ(child->exit_status(), 0);
}

// --- child process adapter --------------------------------------------------

TEST(ProcessAdapter, HandshakeGivesPid) {
  auto child = fixture_adapter("echo");
  ASSERT_TRUE(child->pid().has_value());
  EXPECT_GT(*child->pid(), 0);
  EXPECT_TRUE(child->running());
  child->shutdown();
  child->shutdown();
  EXPECT_FALSE(child->running());
}

TEST(ProcessAdapter, NonexistentCommand) {
  EXPECT_THROW(ProcessAdapter::spawn("/nonexistent", {}), ProtocolError);
}

TEST(ProcessAdapter, GarbageFirstLineKillsChild) {
  const auto start = Clock::now();
  EXPECT_THROW(fixture_adapter("garbage"), ProtocolError);
  EXPECT_LT(seconds_since(start), 5.0);
}

TEST(ProcessAdapter, WrongProtocolVersion) {
  EXPECT_THROW(fixture_adapter("wrong-version"), ProtocolError);
}

TEST(ProcessAdapter, HandshakeTimeout) {
  ProcessAdapter::Options o;
  o.handshake_timeout = std::chrono::milliseconds(300);
  const auto start = Clock::now();
  EXPECT_THROW(fixture_adapter("silent", "", o), ProtocolError);
  EXPECT_LT(seconds_since(start), 5.0);
}

TEST(ProcessAdapter, ChildExitMidRequest) {
  TempDir dir;
  const Manifest m = testing_util::write_dataset(dir / "d", {"rose_garden"}, 1);
  auto child = fixture_adapter("die");
  EXPECT_THROW(child->infer({"r", m.resolve(m.entries[0]).string(), std::nullopt, false}), ProtocolError);
  EXPECT_FALSE(child->running());
}

TEST(ProcessAdapter, MalformedResponseLine) {
  auto child = fixture_adapter("malformed");
  EXPECT_THROW(child->infer({"r", "/x.ppm", std::nullopt, false}), ProtocolError);
}

TEST(ProcessAdapter, RequestTimeout) {
  ProcessAdapter::Options o;
  o.request_timeout = std::chrono::milliseconds(200);
  auto child = fixture_adapter("slow", "3000", o);
  const auto start = Clock::now();
  EXPECT_THROW(child->infer({"r", "/x.ppm", std::nullopt, false}), ProtocolError);
  EXPECT_LT(seconds_since(start), 2.0);
  EXPECT_FALSE(child->running());
}

TEST(ProcessAdapter, SplitCommandLine) {
  EXPECT_EQ(split_command_line("python3  -m ref 'a b' \"c d\""),
            (std::vector<std::string>{"python3", "-m", "ref", "a b", "c d"}));
  EXPECT_TRUE(split_command_line("   ").empty());
}

// --- resource monitoring ----------------------------------------------------

TEST(ResourceMonitor, BusyLoopSaturatesOneCore) {
  const pid_t pid = spawn_fixture({"busy", "2"});
  ASSERT_GT(pid, 0);
  const ResourceSeries s = monitor_resources(pid, 100);
  reap(pid);
  ASSERT_GE(s.samples.size(), 5u);
  EXPECT_GE(s.cpu_max_percent(), 80.0);
  EXPECT_LE(s.cpu_mean_percent(), s.cpu_max_percent());
}

TEST(ResourceMonitor, TouchedMemoryShowsInPeakRss) {
  const pid_t pid = spawn_fixture({"alloc", "256", "2"});
  ASSERT_GT(pid, 0);
  const ResourceSeries s = monitor_resources(pid, 100);
  reap(pid);
  const double mib = 1 << 20;
  EXPECT_NEAR(static_cast<double>(s.memory_peak_bytes()), 256 * mib, 0.15 * 256 * mib);
}

TEST(ResourceMonitor, InstantExitDoesNotCrash) {
  const pid_t pid = spawn_fixture({"exit"});
  ASSERT_GT(pid, 0);
  const ResourceSeries s = monitor_resources(pid, 100);
  reap(pid);
  EXPECT_TRUE(!s.samples.empty() || s.truncated || s.empty());
  EXPECT_EQ(s.metrics().at("resource.sample_count").as_double(), static_cast<double>(s.samples.size()));
}

TEST(ResourceMonitor, SeriesInvariants) {
  const pid_t pid = spawn_fixture({"busy", "0.6"});
  const ResourceSeries s = monitor_resources(pid, 50);
  reap(pid);
  double max = 0, sum = 0;
  std::int64_t peak = 0;
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    if (i > 0) EXPECT_GT(s.samples[i].timestamp_ms, s.samples[i - 1].timestamp_ms);
    max = std::max(max, s.samples[i].cpu_percent);
    sum += s.samples[i].cpu_percent;
    peak = std::max(peak, s.samples[i].rss_bytes);
  }
  ASSERT_FALSE(s.samples.empty());
  EXPECT_EQ(s.cpu_max_percent(), max);
  EXPECT_DOUBLE_EQ(s.cpu_mean_percent(), sum / s.samples.size());
  EXPECT_EQ(s.memory_peak_bytes(), peak);
}

TEST(ResourceMonitor, SlowSamplerDoesNotSlowInference) {
  TempDir dir;
  const Manifest m = testing_util::write_dataset(dir / "d", {"rose_garden"}, 1);
  const std::string input = m.resolve(m.entries[0]).string();
  auto timed = [&](bool monitored) {
    auto child = fixture_adapter("slow", "40");
    ResourceMonitor monitor;
    monitor.set_sample_hook([] { std::this_thread::sleep_for(std::chrono::milliseconds(150)); });
    if (monitored) monitor.start(*child->pid(), 10);
    const auto start = Clock::now();
    for (int i = 0; i < 30; ++i) child->infer({"r" + std::to_string(i), input, std::nullopt, false});
    const double t = seconds_since(start);
    if (monitored) monitor.stop();
    child->shutdown();
    return t;
  };
  double plain = 1e9, monitored = 1e9;
  for (int rep = 0; rep < 2; ++rep) {
    plain = std::min(plain, timed(false));
    monitored = std::min(monitored, timed(true));
  }
  EXPECT_LE(std::abs(monitored - plain), 0.05 * plain) << "plain " << plain << " s, monitored " << monitored << " s";
}

TEST(DiskUsage, Examples) {
  TempDir dir;
  std::filesystem::create_directories(dir / "model");
  std::ofstream(dir / "model/a.bin") << std::string(100, 'a');
  std::ofstream(dir / "model/b.bin") << std::string(200, 'b');
  EXPECT_EQ(disk_usage(dir / "model"), 300);

  std::filesystem::create_directories(dir / "empty");
  EXPECT_EQ(disk_usage(dir / "empty"), 0);

  std::filesystem::create_directories(dir / "n/x/y/z");
  std::ofstream(dir / "n/top") << std::string(1, 't');
  std::ofstream(dir / "n/x/one") << std::string(10, 'o');
  std::ofstream(dir / "n/x/y/two") << std::string(20, 't');
  std::ofstream(dir / "n/x/y/z/three") << std::string(300, 'h');
  EXPECT_EQ(disk_usage(dir / "n"), 331);

  std::filesystem::create_directory_symlink(dir / "model", dir / "n/link");
  std::filesystem::create_symlink(dir / "model/b.bin", dir / "n/filelink");
  EXPECT_EQ(disk_usage(dir / "n"), 331);

  EXPECT_THROW(disk_usage(dir / "nope"), Error);
}

// --- context replication ----------------------------------------------------

std::vector<InferenceRequest> requests_for(const Manifest& m) {
  std::vector<InferenceRequest> out;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    out.push_back({"q" + std::to_string(i), m.resolve(m.entries[i]).string(), std::nullopt, false});
  }
  return out;
}

TEST(Context, ArrivalRatePacing) {
  Pacer pacer(2.0);
  const auto start = Clock::now();
  for (int i = 0; i < 10; ++i) pacer.wait();
  EXPECT_GE(seconds_since(start), 4.5);
  EXPECT_LT(seconds_since(start), 6.0);
}

TEST(Context, NoPacingWithoutRate) {
  Pacer pacer(std::nullopt);
  const auto start = Clock::now();
  for (int i = 0; i < 1000; ++i) pacer.wait();
  EXPECT_LT(seconds_since(start), 0.5);
}

TEST(Context, ZeroProbabilityLeavesStreamUnchanged) {
  TempDir dir;
  const Manifest m = testing_util::write_dataset(dir / "d", {"rose_garden"}, 10);
  ContextSpec spec;
  spec.input_failure_prob = 0.0;
  const auto reqs = requests_for(m);
  const ContextStream s = apply_context(spec, reqs, 1, dir / "scratch");
  EXPECT_EQ(s.injected_count, 0);
  for (std::size_t i = 0; i < reqs.size(); ++i) EXPECT_EQ(s.requests[i].input_path, reqs[i].input_path);
}

TEST(Context, CertainFailureCorruptsEveryRequest) {
  TempDir dir;
  const Manifest m = testing_util::write_dataset(dir / "d", {"rose_garden"}, 10);
  ContextSpec spec;
  spec.input_failure_prob = 1.0;
  const ContextStream s = apply_context(spec, requests_for(m), 1, dir / "scratch");
  EXPECT_EQ(s.injected_count, 10);
  for (const auto& r : s.requests) EXPECT_THROW(load_ppm(r.input_path), ImageError);
}

TEST(Context, InjectionDependsOnlyOnSeed) {
  TempDir dir;
  const Manifest m = testing_util::write_dataset(dir / "d", {"rose_garden"}, 40);
  ContextSpec spec;
  spec.input_failure_prob = 0.3;
  const ContextStream a = apply_context(spec, requests_for(m), 42, dir / "a");
  const ContextStream b = apply_context(spec, requests_for(m), 42, dir / "b");
  EXPECT_EQ(a.injected_count, b.injected_count);
  EXPECT_GT(a.injected_count, 0);
  EXPECT_LT(a.injected_count, 40);
  for (std::size_t i = 0; i < a.requests.size(); ++i) {
    EXPECT_EQ(a.requests[i].input_path == requests_for(m)[i].input_path,
              b.requests[i].input_path == requests_for(m)[i].input_path);
  }
}

// --- running test cases -----------------------------------------------------

struct CaseFixture {
  TempDir dir;
  Manifest manifest;
  RunOptions options;

  explicit CaseFixture(int per_group = 100) {
    manifest = testing_util::write_dataset(dir / "data", kGroups, per_group);
    options.base_dir = dir.path();
    options.work_dir = dir / "work";
    options.seed = 7;
  }

  TestCase from_catalog(const std::string& name) const {
    return map_scenario_to_test_case(
        Catalog::builtin().find(name)->instantiate("data/manifest.json", "model", kGroups));
  }
};

AdapterFactory stub_factory(StubConfig c) {
  return [c] { return std::make_unique<StubAdapter>(c); };
}

TEST(RunTestCase, FairnessAllGroupsAboveThreshold) {
  CaseFixture f;
  StubConfig c;
  c.group_accuracy = {{"rose_garden", 0.95}, {"succulent_garden", 0.92}, {"herb_garden", 0.91}};
  const TestResult r = run_test_case(f.from_catalog("fairness-group-accuracy"), stub_factory(c), nullptr, f.options);
  ASSERT_EQ(r.verdicts.size(), 1u);
  EXPECT_EQ(r.status(), CaseStatus::kPassed);
  EXPECT_EQ(*r.metrics.at("accuracy.min_group").exact, Rational(91, 100));
  EXPECT_EQ(*r.metrics.at("accuracy.group.rose_garden").exact, Rational(95, 100));
}

TEST(RunTestCase, FairnessOneGroupBelowThreshold) {
  CaseFixture f;
  StubConfig c;
  c.group_accuracy = {{"rose_garden", 0.95}, {"succulent_garden", 0.92}, {"herb_garden", 0.88}};
  const TestResult r = run_test_case(f.from_catalog("fairness-group-accuracy"), stub_factory(c), nullptr, f.options);
  EXPECT_EQ(r.status(), CaseStatus::kFailed);
  EXPECT_EQ(r.verdicts[0].status, VerdictStatus::kFail);
  EXPECT_EQ(r.verdicts[0].measured_value->as_double(), 0.88);
}

TEST(RunTestCase, EvidenceContract) {
  CaseFixture f(10);
  const TestCase tc = f.from_catalog("interpretability-evidence");
  StubConfig c;
  EXPECT_EQ(run_test_case(tc, stub_factory(c), nullptr, f.options).status(), CaseStatus::kPassed);
  c.evidence = StubConfig::Evidence::kNone;
  const TestResult none = run_test_case(tc, stub_factory(c), nullptr, f.options);
  EXPECT_EQ(none.verdicts[0].status, VerdictStatus::kFail);
  EXPECT_EQ(none.metrics.at("evidence.present_rate").as_double(), 0.0);
  c.evidence = StubConfig::Evidence::kMismatch;
  const TestResult mismatch = run_test_case(tc, stub_factory(c), nullptr, f.options);
  ASSERT_EQ(mismatch.verdicts.size(), 1u);
  EXPECT_EQ(mismatch.verdicts[0].status, VerdictStatus::kError);
  EXPECT_FALSE(mismatch.verdicts[0].detail.empty());
}

TEST(RunTestCase, ChildEvidenceMatchesInputShape) {
  CaseFixture f(5);
  const TestCase tc = f.from_catalog("interpretability-evidence");
  const TestResult r = run_test_case(tc, [] { return fixture_adapter("evidence"); }, nullptr, f.options);
  EXPECT_EQ(r.status(), CaseStatus::kPassed) << r.verdicts[0].detail;
  const TestResult echo = run_test_case(tc, [] { return fixture_adapter("echo"); }, nullptr, f.options);
  EXPECT_EQ(echo.status(), CaseStatus::kFailed);
}

TEST(RunTestCase, AdapterDeathErrorsTheCase) {
  CaseFixture f(3);
  const TestCase tc = f.from_catalog("fairness-group-accuracy");
  const TestResult r = run_test_case(tc, [] { return fixture_adapter("die"); }, nullptr, f.options);
  EXPECT_EQ(r.status(), CaseStatus::kErrored);
  ASSERT_EQ(r.verdicts.size(), tc.conditions.size());
  for (const auto& v : r.verdicts) EXPECT_EQ(v.status, VerdictStatus::kError);
  EXPECT_TRUE(r.error.has_value());
}

TEST(RunTestCase, SpawnFailureErrorsTheCase) {
  CaseFixture f(3);
  const TestCase tc = f.from_catalog("performance-platform");
  const TestResult r =
      run_test_case(tc, [] { return ProcessAdapter::spawn("/nonexistent", {}); }, nullptr, f.options);
  EXPECT_EQ(r.status(), CaseStatus::kErrored);
  EXPECT_EQ(r.verdicts.size(), 3u);
}

TEST(RunTestCase, MissingManifestErrorsEveryCondition) {
  CaseFixture f(3);
  TestCase tc = f.from_catalog("performance-platform");
  tc.data_spec.manifest_path = "nowhere/manifest.json";
  const TestResult r = run_test_case(tc, stub_factory({}), nullptr, f.options);
  EXPECT_EQ(r.status(), CaseStatus::kErrored);
  EXPECT_EQ(r.verdicts.size(), 3u);
}

TEST(RunTestCase, UnrepresentativeDatasetErrors) {
  CaseFixture f(10);
  TestCase tc = f.from_catalog("fairness-group-accuracy");
  tc.data_spec.group_weights = {{"rose_garden", 0.6}, {"succulent_garden", 0.2}, {"herb_garden", 0.2}};
  const TestResult r = run_test_case(tc, stub_factory({}), nullptr, f.options);
  EXPECT_EQ(r.status(), CaseStatus::kErrored);
  ASSERT_TRUE(r.error);
  EXPECT_NE(r.error->find("representative"), std::string::npos);
  tc.data_spec.group_weights = {{"rose_garden", 1.0 / 3}, {"succulent_garden", 1.0 / 3}, {"herb_garden", 1.0 / 3}};
  EXPECT_EQ(run_test_case(tc, stub_factory({}), nullptr, f.options).status(), CaseStatus::kPassed);
}

TEST(RunTestCase, MissingDiskPathErrorsOnlyThatCondition) {
  CaseFixture f(3);
  const TestResult r = run_test_case(f.from_catalog("performance-platform"), stub_factory({}), nullptr, f.options);
  ASSERT_EQ(r.verdicts.size(), 3u);
  EXPECT_EQ(r.verdicts[0].status, VerdictStatus::kPass);
  EXPECT_EQ(r.verdicts[1].status, VerdictStatus::kPass);
  EXPECT_EQ(r.verdicts[2].status, VerdictStatus::kError);
}

TEST(RunTestCase, BlurRobustness) {
  CaseFixture f(40);
  const TestCase tc = f.from_catalog("robustness-blur");
  const TestResult same = run_test_case(tc, stub_factory({}), nullptr, f.options);
  EXPECT_EQ(same.status(), CaseStatus::kPassed);
  for (const char* level : {"blur_minimal", "blur_intermediate", "blur_maximal"}) {
    EXPECT_EQ(same.metrics.at(std::string("wilcoxon.p_two_sided.") + level).as_double(), 1.0);
  }
  StubConfig drop;
  drop.transform_accuracy = {{"blur", 0.6}};
  const TestResult dropped = run_test_case(tc, stub_factory(drop), nullptr, f.options);
  EXPECT_EQ(dropped.status(), CaseStatus::kFailed);
  EXPECT_LT(dropped.metrics.at("wilcoxon.p_two_sided").as_double(), 0.05);
}

TEST(RunTestCase, InputFailureContext) {
  CaseFixture f(5);
  TestCase tc = f.from_catalog("fairness-group-accuracy");
  tc.context.input_failure_prob = 1.0;
  const TestResult r = run_test_case(tc, stub_factory({}), nullptr, f.options);
  EXPECT_EQ(r.metrics.at("input_failure.injected_count").as_double(), 15.0);
  EXPECT_EQ(r.metrics.at("inference.error_count").as_double(), 15.0);
  EXPECT_EQ(r.metrics.at("accuracy.min_group").as_double(), 0.0);
}

TEST(RunTestCase, DeterministicWithFixedSeed) {
  CaseFixture f(20);
  for (const auto& e : Catalog::builtin().entries()) {
    const TestCase tc = map_scenario_to_test_case(e.instantiate("data/manifest.json", "data", kGroups));
    StubConfig c;
    c.default_accuracy = 0.8;
    c.transform_accuracy = {{"blur_maximal", 0.5}};
    const TestResult a = run_test_case(tc, stub_factory(c), nullptr, f.options);
    const TestResult b = run_test_case(tc, stub_factory(c), nullptr, f.options);
    EXPECT_EQ(a.metrics, b.metrics) << e.name;
    EXPECT_EQ(a.evidence, b.evidence) << e.name;
    ASSERT_EQ(a.verdicts.size(), tc.conditions.size());
  }
}

TEST(RunTestCase, ChildResourcesThroughTheHarness) {
  CaseFixture f(3);
  std::filesystem::create_directories(f.dir / "model");
  std::ofstream(f.dir / "model/w.bin") << std::string(300, 'w');
  const TestCase tc = f.from_catalog("performance-platform");
  const TestResult r = run_test_case(tc, [] { return fixture_adapter("alloc", "64"); }, nullptr, f.options);
  ASSERT_EQ(r.verdicts.size(), 3u);
  EXPECT_EQ(r.metrics.at("disk.total_bytes").as_double(), 300.0);
  EXPECT_GE(r.metrics.at("resource.sample_count").as_double(), 1.0);
  EXPECT_GE(r.metrics.at("memory.peak_bytes").as_double(), 60.0 * (1 << 20));
  EXPECT_EQ(r.verdicts[1].status, VerdictStatus::kPass);
}

}  // namespace
}  // namespace qase
