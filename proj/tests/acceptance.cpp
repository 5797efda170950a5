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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria, capped at 1.

#include <sys/wait.h>
#include <spawn.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "qase/adapter.hpp"
#include "qase/condition.hpp"
#include "qase/demo.hpp"
#include "qase/image.hpp"
#include "qase/json_io.hpp"
#include "qase/mapping.hpp"
#include "qase/resources.hpp"
#include "qase/runner.hpp"
#include "qase/stats.hpp"
#include "test_util.hpp"

namespace qase {
namespace {

using Clock = std::chrono::steady_clock;
using testing_util::TempDir;

// Pinned tolerances.
constexpr double kFloatTol = 1e-12;
constexpr double kExactBudgetSeconds = 30.0;
constexpr double kApproxTol = 0.02;
constexpr double kRankSumCrossTol = 1e-9;
constexpr double kMemoryRelTol = 0.15;
constexpr double kBusyCpuFloor = 80.0;
constexpr double kResourceBudgetSeconds = 10.0;
constexpr int kBlurByteTol = 1;
constexpr double kBlurMeanDrift = 1.0;
constexpr double kEndToEndBudgetSeconds = 60.0;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail << what << "; ";
    }
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const std::vector<std::string> kGroups = {"rose_garden", "succulent_garden", "herb_garden"};

TestCase from_catalog(const std::string& name, const std::vector<std::string>& groups) {
  return map_scenario_to_test_case(Catalog::builtin().find(name)->instantiate("data/manifest.json", "model", groups));
}

AdapterFactory stub_factory(StubConfig c) {
  return [c] { return std::make_unique<StubAdapter>(c); };
}

RunOptions options_for(const TempDir& dir) {
  RunOptions o;
  o.base_dir = dir.path();
  o.work_dir = dir / "work";
  o.seed = 7;
  return o;
}

void wilcoxon_exactness(Outcome& out) {
  const auto start = Clock::now();
  std::mt19937_64 rng(616);
  int checked = 0;
  for (int n1 = 1; n1 <= 6; ++n1) {
    for (int n2 = 1; n2 <= 6; ++n2) {
      for (int trial = 0; trial < 200; ++trial) {
        const auto [x, y] = oracle::tie_free_samples(rng, n1, n2);
        const auto t = stats::wilcoxon_rank_sum(x, y, stats::RankSumMethod::kExact);
        const oracle::ExactP want = oracle::enumerate_rank_sum(x, y);
        out.require(t.p_exact.has_value(), "exact path returned no rational");
        if (!out.ok) return;
        out.require(*t.p_exact == Rational(want.num, want.den),
                    "n1=" + std::to_string(n1) + " n2=" + std::to_string(n2) + " rational mismatch");
        out.require(std::abs(t.p_two_sided - static_cast<double>(want.num) / want.den) <= kFloatTol,
                    "float p off by more than tolerance");
        out.require(t.u_statistic == want.u, "U mismatch");
        ++checked;
      }
    }
  }
  const double secs = seconds_since(start);
  out.require(secs < kExactBudgetSeconds, "took " + fmt(secs) + " s");
  out.detail << checked << " samples, " << fmt(secs) << " s";
}

void wilcoxon_approximation(Outcome& out) {
  std::mt19937_64 rng(617);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto [x, y] = oracle::tie_free_samples(rng, 10, 10);
    const auto t = stats::wilcoxon_rank_sum(x, y, stats::RankSumMethod::kNormalApprox);
    const oracle::ExactP exact = oracle::enumerate_rank_sum(x, y);
    worst = std::max(worst, std::abs(t.p_two_sided - static_cast<double>(exact.num) / exact.den));
  }
  out.require(worst <= kApproxTol, "max |p_approx - p_exact| = " + fmt(worst));
  out.detail << "max |dp| = " << fmt(worst) << " over 100 trials";
}

void fairness(Outcome& out) {
  TempDir dir;
  testing_util::write_dataset(dir / "data", kGroups, 100);
  const TestCase tc = from_catalog("fairness-group-accuracy", kGroups);
  out.require(tc.conditions.size() == 1 && tc.conditions[0].metric_path == "accuracy.min_group",
              "catalog entry does not bind accuracy.min_group");
  const MetricValue threshold = tc.conditions[0].normalized_threshold();
  out.require(threshold.exact && *threshold.exact == Rational(9, 10), "threshold is not exactly 9/10");

  auto run = [&](double a, double b, double c) {
    StubConfig cfg;
    cfg.group_accuracy = {{"rose_garden", a}, {"succulent_garden", b}, {"herb_garden", c}};
    return run_test_case(tc, stub_factory(cfg), nullptr, options_for(dir));
  };
  const TestResult low = run(0.95, 0.92, 0.88);
  const TestResult high = run(0.95, 0.92, 0.91);
  out.require(low.metrics.at("accuracy.min_group").exact == Rational(88, 100), "min group is not 0.88");
  out.require(low.verdicts.at(0).status == VerdictStatus::kFail, "{.95,.92,.88} did not FAIL");
  out.require(high.verdicts.at(0).status == VerdictStatus::kPass, "{.95,.92,.91} did not PASS");

  // On the boundary the exact comparison must pass.
  const TestResult edge = run(0.95, 0.92, 0.90);
  out.require(edge.verdicts.at(0).status == VerdictStatus::kPass, "0.90 on the boundary did not PASS");
  out.detail << "0.88 FAIL, 0.91 PASS, 0.90 PASS";
}

void robustness(Outcome& out) {
  const std::vector<std::string> groups = {"rose_garden", "herb_garden"};
  const std::vector<std::string> levels = {"blur_minimal", "blur_intermediate", "blur_maximal"};
  TempDir dir;
  testing_util::write_dataset(dir / "data", groups, 100);
  const TestCase tc = from_catalog("robustness-blur", groups);

  const TestResult same = run_test_case(tc, stub_factory({}), nullptr, options_for(dir));
  out.require(same.status() == CaseStatus::kPassed, "no-drop run did not PASS");
  for (const auto& level : levels) {
    const double p = same.metrics.at("wilcoxon.p_two_sided." + level).as_double();
    out.require(p > 0.05, "no-drop p at " + level + " = " + fmt(p));
  }

  StubConfig drop;
  drop.default_accuracy = 0.95;
  drop.transform_accuracy = {{"blur", 0.60}};
  const TestResult dropped = run_test_case(tc, stub_factory(drop), nullptr, options_for(dir));
  out.require(dropped.status() == CaseStatus::kFailed, "0.95 -> 0.60 run did not FAIL");

  // Closed-form z oracle on the reported correct counts.
  const std::int64_t n = 200;
  for (const auto& level : levels) {
    const Rational acc = *dropped.metrics.at("accuracy.perturbed." + level).exact;
    out.require(acc == Rational(60, 100), level + " accuracy is not 0.60");
    const double want = oracle::binary_rank_sum_p(n, 190, n, 120);
    const double got = dropped.metrics.at("wilcoxon.p_two_sided." + level).as_double();
    out.require(std::abs(got - want) <= kRankSumCrossTol * std::max(1.0, want),
                level + " p=" + fmt(got) + " oracle=" + fmt(want));
  }
  out.detail << "drop p=" << fmt(dropped.metrics.at("wilcoxon.p_two_sided").as_double());
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

ResourceSeries monitor_fixture(const std::vector<std::string>& args) {
  const pid_t pid = spawn_fixture(args);
  if (pid <= 0) throw Error("cannot spawn fixture");
  ResourceSeries s = monitor_resources(pid, 100);
  int status = 0;
  waitpid(pid, &status, 0);
  return s;
}

void resources(Outcome& out) {
  const auto start = Clock::now();
  const Condition mem = parse_condition("memory.peak_bytes <= 512MB");
  const Condition cpu = parse_condition("cpu.max_percent <= 30");

  const ResourceSeries alloc = monitor_fixture({"alloc", "256", "2"});
  const double mib = 1 << 20;
  const double peak = static_cast<double>(alloc.memory_peak_bytes());
  out.require(std::abs(peak - 256 * mib) <= kMemoryRelTol * 256 * mib, "peak " + fmt(peak / mib) + " MiB");
  out.require(evaluate_condition(mem, alloc.metrics()).status == VerdictStatus::kPass, "memory condition not PASS");

  const ResourceSeries busy = monitor_fixture({"busy", "2"});
  out.require(busy.cpu_max_percent() >= kBusyCpuFloor, "busy max cpu " + fmt(busy.cpu_max_percent()));
  out.require(evaluate_condition(cpu, busy.metrics()).status == VerdictStatus::kFail, "cpu condition not FAIL");

  const double secs = seconds_since(start);
  out.require(secs < kResourceBudgetSeconds, "took " + fmt(secs) + " s");
  out.detail << "peak " << fmt(peak / mib) << " MiB, busy max " << fmt(busy.cpu_max_percent()) << "%, "
             << fmt(secs) << " s";
}

void disk(Outcome& out) {
  TempDir dir;
  std::filesystem::create_directories(dir / "model/sub");
  std::ofstream(dir / "model/weights.bin") << std::string(200, 'w');
  std::ofstream(dir / "model/sub/labels.txt") << std::string(100, 'l');
  const std::int64_t bytes = disk_usage(dir / "model");
  out.require(bytes == 300, "disk_usage = " + std::to_string(bytes));

  const Condition c = parse_condition("disk.total_bytes <= 128GB");
  const MetricValue t = c.normalized_threshold();
  out.require(t.exact && *t.exact == Rational(std::int64_t{128} << 30, 1), "threshold is not 128 * 2^30");
  MetricSet m{{"disk.total_bytes", MetricValue::integer(bytes)}};
  out.require(evaluate_condition(c, m).status == VerdictStatus::kPass, "300 bytes did not PASS");
  MetricSet over{{"disk.total_bytes", MetricValue::integer((std::int64_t{128} << 30) + 1)}};
  out.require(evaluate_condition(c, over).status == VerdictStatus::kFail, "128 GiB + 1 did not FAIL");
  out.detail << "300 B PASS, threshold " << (std::int64_t{128} << 30) << " B";
}

void interpretability(Outcome& out) {
  TempDir dir;
  testing_util::write_dataset(dir / "data", kGroups, 10);
  const TestCase tc = from_catalog("interpretability-evidence", kGroups);
  auto verdict = [&](StubConfig::Evidence e) {
    StubConfig c;
    c.evidence = e;
    const TestResult r = run_test_case(tc, stub_factory(c), nullptr, options_for(dir));
    return r.verdicts.at(0);
  };
  out.require(verdict(StubConfig::Evidence::kFull).status == VerdictStatus::kPass, "full evidence not PASS");
  out.require(verdict(StubConfig::Evidence::kNone).status == VerdictStatus::kFail, "missing evidence not FAIL");
  out.require(verdict(StubConfig::Evidence::kMismatch).status == VerdictStatus::kError, "bad shape not ERROR");
  out.detail << "full PASS, none FAIL, mismatch ERROR";
}

Image random_image(std::mt19937_64& rng, int w, int h) {
  Image img(w, h);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(rng() & 0xff);
  return img;
}

double channel_mean(const Image& img, int c) {
  double sum = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) sum += img.at(x, y, c);
  }
  return sum / (img.width() * img.height());
}

// Cycles through the default blur levels the harness applies.
void blur_oracle(Outcome& out) {
  std::mt19937_64 rng(623);
  const BlurLevelSet levels;
  int worst = 0;
  std::map<double, double> drift;
  for (int i = 0; i < 50; ++i) {
    const Image img = random_image(rng, 16, 16);
    const double sigma = levels[i % 3];
    const Image got = gaussian_blur(img, sigma);
    const Image want = oracle::dense_blur(img, sigma);
    for (std::size_t k = 0; k < got.pixels().size(); ++k) {
      worst = std::max(worst, std::abs(int{got.pixels()[k]} - int{want.pixels()[k]}));
    }
    for (int c = 0; c < 3; ++c) {
      drift[sigma] = std::max(drift[sigma], std::abs(channel_mean(got, c) - channel_mean(img, c)));
    }
    out.require(gaussian_blur(img, 0.0) == img, "sigma 0 is not the identity");
  }
  out.require(worst <= kBlurByteTol, "max byte difference " + std::to_string(worst));
  for (const auto& [sigma, d] : drift) {
    out.require(d <= kBlurMeanDrift, "mean drift " + fmt(d) + " at sigma " + fmt(sigma));
  }
  out.detail << "max byte diff " << worst << ", max channel-mean drift";
  for (const auto& [sigma, d] : drift) out.detail << " sigma " << fmt(sigma) << ": " << fmt(d);
}

void condition_grammar(Outcome& out) {
  std::mt19937_64 rng(624);
  const std::vector<std::string> segments = {"accuracy", "min_group", "cpu", "max_percent", "memory",
                                             "peak_bytes", "wilcoxon", "p_two_sided", "disk", "x_"};
  const std::vector<std::string> cmps = {"<=", "<", ">=", ">", "==", "!="};
  const std::vector<std::string> units = {"", "%", "MB", "GB", "ms"};
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  int round_trips = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string text = segments[pick(segments.size())];
    for (std::size_t k = pick(3); k > 0; --k) text += "." + segments[pick(segments.size())];
    const std::string& cmp = cmps[pick(cmps.size())];
    text += (pick(2) ? " " : "") + cmp + " ";
    if ((cmp == "==" || cmp == "!=") && pick(5) == 0) {
      text += pick(2) ? "true" : "false";
    } else {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.*f", static_cast<int>(pick(4)), std::ldexp(double(rng() >> 11), -53) * 1e4);
      text += buf + std::string(pick(2) ? " " : "") + units[pick(units.size())];
    }
    const Condition c = parse_condition(text);
    const std::string canonical = serialize_condition(c);
    if (parse_condition(canonical) == c && serialize_condition(parse_condition(canonical)) == canonical) {
      ++round_trips;
    } else {
      out.require(false, "round trip broke on \"" + text + "\"");
    }
  }

  const std::vector<std::pair<std::string, int>> corpus = {
      {"cpu.max_percent <= thirty", 20}, {"cpu.max_percent <=", 18},
      {"", 1},                           {"Accuracy >= 0.9", 1},
      {"accuracy.min_group >= 0.9 kB", 27}, {"accuracy..min_group >= 0.9", 10},
      {"accuracy.min_group = 0.9", 20},  {"accuracy.min_group >= 0.", 24},
      {"evidence.present >= true", 21},  {"accuracy.group2 >= 0.9", 15},
      {"accuracy.min_group 0.9", 20},    {"accuracy.min_group >= 0.9 % x", 29},
  };
  int rejected = 0;
  for (const auto& [text, column] : corpus) {
    try {
      parse_condition(text);
      out.require(false, "accepted \"" + text + "\"");
    } catch (const ConditionSyntaxError& e) {
      out.require(e.column() == column, "\"" + text + "\" at column " + std::to_string(e.column()));
      if (e.column() == column) ++rejected;
    }
  }
  out.detail << round_trips << "/1000 round trips, " << rejected << "/" << corpus.size() << " malformed";
}

int run_cli(const std::string& args) {
  const std::string cmd = "'" + std::string(QASE_CLI) + "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void end_to_end(Outcome& out) {
  const auto start = Clock::now();
  TempDir dir;
  const std::string root = (dir / "demo").string();
  out.require(run_cli("demo --out '" + root + "'") == 0, "demo failed");
  const std::string plan = root + "/demo.plan";
  const int a = run_cli("run '" + plan + "' --stub --seed 7 --store '" + (dir / "s1").string() + "'");
  const int b = run_cli("run '" + plan + "' --stub --seed 7 --store '" + (dir / "s2").string() + "'");
  out.require(a == 0 && b == 0, "run exit codes " + std::to_string(a) + ", " + std::to_string(b));
  if (!out.ok) return;

  const std::string plan_id = read_json_file(plan)["id"];
  const auto rel = std::filesystem::path("plans") / plan_id;
  const std::string s1 = read_text_file(dir / "s1" / rel / "summary.json");
  const std::string s2 = read_text_file(dir / "s2" / rel / "summary.json");
  out.require(!s1.empty() && s1 == s2, "summaries differ");

  int sections = 0;
  std::istringstream report(read_text_file(dir / "s1" / rel / "report.md"));
  for (std::string line; std::getline(report, line);) {
    if (line.rfind("## ", 0) == 0) ++sections;
  }
  out.require(sections == 5, std::to_string(sections) + " report sections");
  const double secs = seconds_since(start);
  out.require(secs < kEndToEndBudgetSeconds, "took " + fmt(secs) + " s");
  out.detail << "identical summaries, " << sections << " sections, " << fmt(secs) << " s";
}

}  // namespace
}  // namespace qase

int main() {
  const std::vector<std::pair<const char*, std::function<void(qase::Outcome&)>>> criteria = {
      {"wilcoxon-exactness", qase::wilcoxon_exactness},
      {"wilcoxon-approximation", qase::wilcoxon_approximation},
      {"fairness-scenario", qase::fairness},
      {"robustness-pipeline", qase::robustness},
      {"resource-bounds", qase::resources},
      {"disk-bound", qase::disk},
      {"interpretability-contract", qase::interpretability},
      {"blur-oracle", qase::blur_oracle},
      {"condition-grammar", qase::condition_grammar},
      {"end-to-end-determinism", qase::end_to_end},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    qase::Outcome out;
    try {
      check(out);
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail << "exception: " << e.what();
    }
    std::printf("%s %s: %s\n", out.ok ? "PASS" : "FAIL", name, out.detail.str().c_str());
    std::fflush(stdout);
    if (!out.ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
