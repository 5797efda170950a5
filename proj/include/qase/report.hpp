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

#include <string>
#include <vector>

#include "json.hpp"
#include "qase/mapping.hpp"
#include "qase/result.hpp"

namespace qase {

struct Report {
  std::string markdown;
  // Counts, per-case verdicts and metric values. Carries no timestamps or
  // wall times, so equal runs give equal summaries.
  nlohmann::json summary;
  CaseStatus overall = CaseStatus::kPassed;
};

// Requires exactly one result per plan case, in plan order, each with one
// verdict per condition; throws Error otherwise.
Report generate_report(const TestPlan& plan, const std::vector<TestResult>& results);

}  // namespace qase
