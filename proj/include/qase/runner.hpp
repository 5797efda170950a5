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
#include <string>
#include <vector>

#include "qase/adapter.hpp"
#include "qase/evidence.hpp"
#include "qase/mapping.hpp"
#include "qase/report.hpp"
#include "qase/result.hpp"

namespace qase {

struct RunOptions {
  std::uint64_t seed = 0;
  // Relative manifest and measurement paths resolve against this directory.
  std::filesystem::path base_dir;
  // Derived datasets and corrupted inputs are written here.
  std::filesystem::path work_dir;
  std::string plan_id = "adhoc";
  std::string adapter_command = "stub";
};

// Runs one test case end to end and returns one verdict per condition. Setup
// and adapter failures produce an errored result rather than an exception.
// Every metric is recorded as an evidence record, persisted when `store` is
// non-null.
TestResult run_test_case(const TestCase& tc, const AdapterFactory& factory, EvidenceStore* store,
                         const RunOptions& options);

struct PlanRun {
  std::vector<TestResult> results;
  Report report;
};

// Runs every case in order. With a store, also writes the plan index, the
// report and the summary under the plan directory.
PlanRun run_plan(const TestPlan& plan, const AdapterFactory& factory, EvidenceStore* store, RunOptions options);

// Regenerates the report of a stored plan from its index and records alone.
Report report_from_store(const EvidenceStore& store, const std::string& plan_id);

}  // namespace qase
