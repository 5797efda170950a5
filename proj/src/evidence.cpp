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

#include "qase/evidence.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include "qase/digest.hpp"
#include "qase/error.hpp"
#include "qase/json_io.hpp"

namespace qase {

using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json provenance_to_json(const Provenance& p) {
  return {{"plan_id", p.plan_id},
          {"run_seed", p.run_seed},
          {"adapter_command", p.adapter_command},
          {"manifest_digest", p.manifest_digest}};
}

Provenance provenance_from_json(const json& j) {
  FieldReader r(j, "provenance");
  Provenance p;
  p.plan_id = r.string("plan_id");
  p.run_seed = r.required("run_seed").get<std::uint64_t>();
  p.adapter_command = r.string("adapter_command");
  p.manifest_digest = r.string("manifest_digest");
  r.finish();
  return p;
}

bool is_hex_id(const std::string& id) {
  return id.size() == 64 && std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

}  // namespace

json EvidenceRecord::payload() const {
  json j;
  j["test_case_id"] = test_case_id;
  j["metric_path"] = metric_path;
  j["value"] = metric_to_json(value);
  j["exact"] = value.exact ? json::array({value.exact->num(), value.exact->den()}) : json(nullptr);
  j["unit"] = unit;
  j["provenance"] = provenance_to_json(provenance);
  return j;
}

std::string EvidenceRecord::compute_id() const { return sha256_hex(payload().dump()); }

EvidenceRecord make_evidence_record(const std::string& test_case_id, const std::string& metric_path,
                                    const MetricValue& value, const Provenance& provenance) {
  EvidenceRecord r;
  r.test_case_id = test_case_id;
  r.metric_path = metric_path;
  r.value = value;
  r.unit = native_unit(metric_path);
  r.created_at = utc_now();
  r.provenance = provenance;
  r.id = r.compute_id();
  return r;
}

json to_json(const EvidenceRecord& r) {
  json j = r.payload();
  j["id"] = r.id;
  j["created_at"] = r.created_at;
  return j;
}

EvidenceRecord evidence_from_json(const json& j) {
  FieldReader f(j, "record");
  EvidenceRecord r;
  r.id = f.string("id");
  r.test_case_id = f.string("test_case_id");
  r.metric_path = f.string("metric_path");
  const json& value = f.required("value");
  const json* exact = f.optional("exact");
  r.value = metric_from_json(value, exact ? *exact : json(nullptr));
  r.unit = f.string("unit");
  r.created_at = f.string("created_at");
  r.provenance = provenance_from_json(f.required("provenance"));
  f.finish();
  return r;
}

EvidenceStore::EvidenceStore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_ / "records");
  std::filesystem::create_directories(root_ / "plans");
}

std::filesystem::path EvidenceStore::plan_dir(const std::string& plan_id) const { return root_ / "plans" / plan_id; }

std::string EvidenceStore::put(const EvidenceRecord& record) {
  const std::string id = record.compute_id();
  if (record.provenance.plan_id.empty() || record.provenance.adapter_command.empty() ||
      record.provenance.manifest_digest.empty()) {
    throw StoreError("record " + record.metric_path + ": provenance fields must be non-empty");
  }
  std::lock_guard lock(write_mutex_);
  const std::filesystem::path path = root_ / "records" / id;
  if (std::filesystem::exists(path)) return id;
  EvidenceRecord stored = record;
  stored.id = id;
  write_json_file(path, to_json(stored));
  return id;
}

EvidenceRecord EvidenceStore::get(const std::string& id) const {
  if (!is_hex_id(id)) throw StoreError("unknown evidence id " + id);
  const std::filesystem::path path = root_ / "records" / id;
  if (!std::filesystem::exists(path)) throw StoreError("unknown evidence id " + id);
  EvidenceRecord r;
  try {
    r = evidence_from_json(read_json_file(path));
  } catch (const Error& e) {
    throw IntegrityError("record " + id + " is corrupted: " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError("record " + id + " is corrupted: " + e.what());
  }
  if (r.id != id || r.compute_id() != id) throw IntegrityError("record " + id + ": digest mismatch");
  return r;
}

std::vector<EvidenceRecord> EvidenceStore::list(const std::string& plan_id) const {
  std::vector<EvidenceRecord> out;
  for (const auto& entry : std::filesystem::directory_iterator(root_ / "records")) {
    const std::string id = entry.path().filename().string();
    if (!is_hex_id(id)) continue;
    EvidenceRecord r = get(id);
    if (r.provenance.plan_id == plan_id) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const EvidenceRecord& a, const EvidenceRecord& b) {
    return std::tie(a.test_case_id, a.metric_path, a.id) < std::tie(b.test_case_id, b.metric_path, b.id);
  });
  return out;
}

void EvidenceStore::write_plan_index(const TestPlan& plan, const std::vector<TestResult>& results) {
  json j;
  j["plan"] = to_json(plan);
  j["results"] = json::array();
  for (const auto& r : results) j["results"].push_back(to_json(r));
  std::lock_guard lock(write_mutex_);
  write_json_file(plan_dir(plan.id) / "index", j);
}

std::pair<TestPlan, std::vector<TestResult>> EvidenceStore::read_plan_index(const std::string& plan_id) const {
  const std::filesystem::path path = plan_dir(plan_id) / "index";
  if (!std::filesystem::exists(path)) throw StoreError("no plan " + plan_id + " in store " + root_.string());
  const json j = read_json_file(path);
  FieldReader r(j, "index");
  TestPlan plan = plan_from_json(r.required("plan"));
  std::vector<TestResult> results;
  const json& rs = r.required("results");
  if (!rs.is_array()) throw SchemaError("index.results: expected an array");
  for (const auto& item : rs) {
    TestResult res = result_from_json(item);
    for (const auto& [path, id] : res.evidence) {
      const EvidenceRecord rec = get(id);
      if (rec.metric_path != path || rec.test_case_id != res.test_case_id) {
        throw IntegrityError("index entry " + path + " points at record for " + rec.metric_path);
      }
      res.metrics[path] = rec.value;
    }
    results.push_back(std::move(res));
  }
  r.finish();
  return {std::move(plan), std::move(results)};
}

void EvidenceStore::write_plan_file(const std::string& plan_id, const std::string& name, const std::string& content) {
  std::lock_guard lock(write_mutex_);
  write_text_file(plan_dir(plan_id) / name, content);
}

}  // namespace qase
