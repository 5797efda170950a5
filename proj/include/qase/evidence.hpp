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
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "qase/mapping.hpp"
#include "qase/metrics.hpp"
#include "qase/result.hpp"

namespace qase {

struct Provenance {
  std::string plan_id;
  std::uint64_t run_seed = 0;
  std::string adapter_command;
  std::string manifest_digest;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// A persisted measurement. The id is the SHA-256 of the canonical payload
// (everything except id and created_at), so re-serializing a record or
// storing it twice leaves the id unchanged.
struct EvidenceRecord {
  std::string id;
  std::string test_case_id;
  std::string metric_path;
  MetricValue value;
  std::string unit;
  std::string created_at;
  Provenance provenance;

  nlohmann::json payload() const;
  std::string compute_id() const;

  friend bool operator==(const EvidenceRecord& a, const EvidenceRecord& b) {
    return a.id == b.id && a.test_case_id == b.test_case_id && a.metric_path == b.metric_path &&
           a.value == b.value && a.value.exact == b.value.exact && a.unit == b.unit && a.created_at == b.created_at &&
           a.provenance == b.provenance;
  }
};

EvidenceRecord make_evidence_record(const std::string& test_case_id, const std::string& metric_path,
                                    const MetricValue& value, const Provenance& provenance);

nlohmann::json to_json(const EvidenceRecord& r);
EvidenceRecord evidence_from_json(const nlohmann::json& j);

// Flat-file, content-addressed store:
//
//   <root>/records/<id>                 one JSON record per file
//   <root>/plans/<plan_id>/index        plan and per-case results
//   <root>/plans/<plan_id>/report.md
//   <root>/plans/<plan_id>/summary.json
//
// Writes go through one mutex; reads take no lock.
class EvidenceStore {
 public:
  explicit EvidenceStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path plan_dir(const std::string& plan_id) const;

  // Idempotent: an existing record with the same id is left untouched.
  std::string put(const EvidenceRecord& record);
  // Throws StoreError for an unknown id and IntegrityError when the stored
  // content no longer hashes to its id.
  EvidenceRecord get(const std::string& id) const;
  // Every record whose provenance names `plan_id`, ordered by test case,
  // then metric path.
  std::vector<EvidenceRecord> list(const std::string& plan_id) const;

  void write_plan_index(const TestPlan& plan, const std::vector<TestResult>& results);
  // Plan and results as stored; result metrics are rebuilt from the
  // referenced records, each integrity-checked.
  std::pair<TestPlan, std::vector<TestResult>> read_plan_index(const std::string& plan_id) const;

  void write_plan_file(const std::string& plan_id, const std::string& name, const std::string& content);

 private:
  std::filesystem::path root_;
  std::mutex write_mutex_;
};

}  // namespace qase
