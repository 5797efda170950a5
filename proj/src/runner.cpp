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

#include "qase/runner.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>

#include "qase/context.hpp"
#include "qase/digest.hpp"
#include "qase/error.hpp"
#include "qase/image.hpp"
#include "qase/manifest.hpp"
#include "qase/stats.hpp"

namespace qase {

namespace {

namespace fs = std::filesystem;

struct Dataset {
  std::string level;  // "original" or a transform level name
  Manifest manifest;
  std::vector<InferenceRequest> requests;
  std::vector<std::string> predictions;  // "" for errored requests
  std::vector<std::optional<Evidence>> evidence;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::uint64_t mix_seed(std::uint64_t seed, const std::string& salt) {
  return seed ^ std::stoull(sha256_hex(salt).substr(0, 16), nullptr, 16);
}

bool has_measurement(const TestCase& tc, const std::string& id) {
  return std::any_of(tc.measurements.begin(), tc.measurements.end(),
                     [&](const MeasurementSpec& m) { return m.id == id; });
}

std::vector<std::string> labels_of(const Manifest& m) {
  std::vector<std::string> out;
  for (const auto& e : m.entries) out.push_back(e.label);
  return out;
}

std::vector<std::string> groups_of(const Manifest& m) {
  std::vector<std::string> out;
  for (const auto& e : m.entries) out.push_back(e.group);
  return out;
}

void merge(MetricSet& into, const MetricSet& from) {
  for (const auto& [k, v] : from) into[k] = v;
}

MetricSet evidence_metrics(const std::vector<Dataset>& datasets) {
  std::int64_t total = 0, present = 0, finite = 0;
  for (const auto& d : datasets) {
    for (std::size_t i = 0; i < d.requests.size(); ++i) {
      ++total;
      const auto& ev = d.evidence[i];
      if (!ev) continue;
      ++present;
      if (!ev->shape_consistent()) {
        throw EvaluationError("request " + d.requests[i].request_id + ": evidence declares " +
                              std::to_string(ev->height) + "x" + std::to_string(ev->width) + " but carries " +
                              std::to_string(ev->values.size()) + " values");
      }
      const ImageSize size = read_ppm_size(d.requests[i].input_path);
      if (ev->height != size.height || ev->width != size.width) {
        throw EvaluationError("request " + d.requests[i].request_id + ": evidence is " +
                              std::to_string(ev->height) + "x" + std::to_string(ev->width) + " for a " +
                              std::to_string(size.height) + "x" + std::to_string(size.width) + " input");
      }
      if (ev->all_finite()) ++finite;
    }
  }
  if (total == 0) throw EvaluationError("no inferences to check evidence on");
  return {{"evidence.present_rate", MetricValue::ratio(present, total)},
          {"evidence.finite_rate", MetricValue::ratio(finite, total)}};
}

MetricSet rank_sum_metrics(const std::vector<Dataset>& datasets) {
  const Dataset& original = datasets.front();
  const auto base = stats::correctness_vector(original.predictions, labels_of(original.manifest));
  MetricSet out;
  std::optional<double> min_p;
  for (std::size_t i = 1; i < datasets.size(); ++i) {
    const Dataset& d = datasets[i];
    const auto labels = labels_of(d.manifest);
    const auto perturbed = stats::correctness_vector(d.predictions, labels);
    const auto t = stats::wilcoxon_rank_sum(base, perturbed);
    MetricValue p = t.p_exact ? MetricValue::ratio(t.p_exact->num(), t.p_exact->den())
                              : MetricValue::number(t.p_two_sided);
    out["wilcoxon.p_two_sided." + d.level] = p;
    out["wilcoxon.u_statistic." + d.level] = MetricValue::number(t.u_statistic);
    const Rational acc = stats::accuracy(d.predictions, labels);
    out["accuracy.perturbed." + d.level] = MetricValue::ratio(acc.num(), acc.den());
    if (!min_p || t.p_two_sided < *min_p) {
      min_p = t.p_two_sided;
      out["wilcoxon.p_two_sided"] = p;
    }
  }
  if (!min_p) throw EvaluationError("rank_sum needs at least one perturbed dataset");
  return out;
}

MetricSet measure(const MeasurementSpec& m, const TestCase& tc, const std::vector<Dataset>& datasets,
                  const std::optional<ResourceSeries>& series, const RunOptions& options) {
  const Dataset& original = datasets.front();
  if (m.id == "accuracy") {
    const Rational a = stats::accuracy(original.predictions, labels_of(original.manifest));
    return {{"accuracy.overall", MetricValue::ratio(a.num(), a.den())}};
  }
  if (m.id == "group_accuracy") {
    return stats::group_accuracy(original.predictions, labels_of(original.manifest), groups_of(original.manifest),
                                 tc.data_spec.required_groups)
        .metrics();
  }
  if (m.id == "rank_sum") return rank_sum_metrics(datasets);
  if (m.id == "resource_monitor") {
    if (!series) throw EvaluationError("adapter exposes no process to monitor");
    if (series->empty()) throw EvaluationError("no resource samples were taken");
    return series->metrics();
  }
  if (m.id == "disk_usage") {
    const auto it = m.params.find("path");
    if (it == m.params.end()) throw EvaluationError("disk_usage needs a path parameter");
    return {{"disk.total_bytes", MetricValue::integer(disk_usage(resolve(options.base_dir, it->second)))}};
  }
  if (m.id == "evidence_check") return evidence_metrics(datasets);
  throw EvaluationError("unknown measurement " + m.id);
}

TestResult errored_result(const TestCase& tc, const std::string& message) {
  TestResult r;
  r.test_case_id = tc.id;
  r.error = message;
  for (const auto& c : tc.conditions) r.verdicts.push_back(errored_verdict(c, message));
  return r;
}

int monitor_interval(const TestCase& tc) {
  for (const auto& m : tc.measurements) {
    if (m.id != "resource_monitor") continue;
    const auto it = m.params.find("interval_ms");
    if (it != m.params.end()) return std::max(1, std::stoi(it->second));
  }
  return 100;
}

}  // namespace

TestResult run_test_case(const TestCase& tc, const AdapterFactory& factory, EvidenceStore* store,
                         const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  auto finish = [&](TestResult r) {
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return r;
  };

  std::vector<Dataset> datasets;
  std::string manifest_digest;
  const fs::path case_dir = options.work_dir / tc.id;
  try {
    const fs::path manifest_path = resolve(options.base_dir, tc.data_spec.manifest_path);
    Manifest manifest = load_manifest(manifest_path);
    manifest_digest = sha256_file(manifest_path);

    const auto counts = manifest.group_counts();
    for (const auto& g : tc.data_spec.required_groups) {
      if (!counts.contains(g)) throw Error("required group \"" + g + "\" has no samples in " + manifest_path.string());
    }
    if (!tc.data_spec.group_weights.empty()) {
      const auto rep =
          check_representativeness(manifest, tc.data_spec.group_weights, tc.data_spec.representativeness_tolerance);
      if (!rep.ok()) {
        std::string msg = "dataset is not representative:";
        for (const auto& v : rep.violations) msg += " " + v + ";";
        msg.pop_back();
        throw Error(msg);
      }
    }

    fs::remove_all(case_dir);
    datasets.push_back({"original", manifest, {}, {}, {}});
    for (const auto& t : tc.data_spec.transforms) {
      const std::string kind(TransformSpec::kind_name(t.kind));
      for (auto& d : generate_perturbation_suite(manifest, t, case_dir / kind, mix_seed(options.seed, tc.id + kind))) {
        datasets.push_back({d.level, std::move(d.manifest), {}, {}, {}});
      }
    }
  } catch (const Error& e) {
    return finish(errored_result(tc, e.what()));
  } catch (const fs::filesystem_error& e) {
    return finish(errored_result(tc, e.what()));
  }

  const bool want_evidence = has_measurement(tc, "evidence_check");
  std::int64_t request_count = 0, error_count = 0, injected = 0;
  std::optional<ResourceSeries> series;
  std::unique_ptr<ModelAdapter> adapter;
  ResourceMonitor monitor;
  try {
    adapter = factory();
    if (const auto pid = adapter->pid()) monitor.start(*pid, monitor_interval(tc));
    Pacer pacer(tc.context.arrival_rate_hz);
    for (auto& d : datasets) {
      std::vector<InferenceRequest> requests;
      for (std::size_t i = 0; i < d.manifest.entries.size(); ++i) {
        InferenceRequest req;
        req.request_id = d.level + "-" + std::to_string(i);
        req.input_path = d.manifest.resolve(d.manifest.entries[i]).string();
        req.want_evidence = want_evidence;
        requests.push_back(std::move(req));
      }
      d.requests = requests;
      ContextStream stream = apply_context(tc.context, std::move(requests),
                                           mix_seed(options.seed, tc.id + "/" + d.level), case_dir / "context" / d.level);
      injected += stream.injected_count;
      adapter->bind_dataset(d.manifest);
      for (const auto& req : stream.requests) {
        pacer.wait();
        InferenceResponse resp = adapter->infer(req);
        if (resp.request_id != req.request_id) {
          throw ProtocolError("response for " + resp.request_id + " while waiting for " + req.request_id);
        }
        ++request_count;
        if (resp.error) ++error_count;
        d.predictions.push_back(resp.label.value_or(""));
        d.evidence.push_back(std::move(resp.evidence));
      }
    }
    if (adapter->pid()) {
      series = monitor.stop();
    } else {
      series = adapter->simulated_resources();
    }
    adapter->shutdown();
  } catch (const Error& e) {
    if (adapter && adapter->pid()) monitor.stop();
    if (adapter) adapter->shutdown();
    return finish(errored_result(tc, std::string("adapter ") + (adapter ? adapter->describe() : "") + ": " + e.what()));
  }

  TestResult result;
  result.test_case_id = tc.id;
  result.metrics = {{"inference.request_count", MetricValue::integer(request_count)},
                    {"inference.error_count", MetricValue::integer(error_count)},
                    {"input_failure.injected_count", MetricValue::integer(injected)}};
  std::map<std::string, std::string> failures;  // measurement id -> reason
  for (const auto& m : tc.measurements) {
    try {
      merge(result.metrics, measure(m, tc, datasets, series, options));
    } catch (const Error& e) {
      failures[m.id] = m.id + " failed: " + e.what();
    } catch (const fs::filesystem_error& e) {
      failures[m.id] = m.id + " failed: " + e.what();
    }
  }

  for (const auto& c : tc.conditions) {
    const auto producer = find_producer(c.metric_path, tc.measurements);
    if (producer && failures.contains(*producer)) {
      result.verdicts.push_back(errored_verdict(c, failures.at(*producer)));
      continue;
    }
    try {
      result.verdicts.push_back(evaluate_condition(c, result.metrics));
    } catch (const EvaluationError& e) {
      result.verdicts.push_back(errored_verdict(c, e.what()));
    }
  }

  const Provenance provenance{options.plan_id, options.seed, options.adapter_command, manifest_digest};
  for (const auto& [path, value] : result.metrics) {
    const EvidenceRecord record = make_evidence_record(tc.id, path, value, provenance);
    result.evidence[path] = store ? store->put(record) : record.id;
  }
  return finish(std::move(result));
}

PlanRun run_plan(const TestPlan& plan, const AdapterFactory& factory, EvidenceStore* store, RunOptions options) {
  options.plan_id = plan.id;
  PlanRun run;
  for (const auto& tc : plan.cases) run.results.push_back(run_test_case(tc, factory, store, options));
  run.report = generate_report(plan, run.results);
  if (store) {
    store->write_plan_index(plan, run.results);
    store->write_plan_file(plan.id, "report.md", run.report.markdown);
    store->write_plan_file(plan.id, "summary.json", run.report.summary.dump(2) + "\n");
  }
  return run;
}

Report report_from_store(const EvidenceStore& store, const std::string& plan_id) {
  const auto [plan, results] = store.read_plan_index(plan_id);
  return generate_report(plan, results);
}

}  // namespace qase
