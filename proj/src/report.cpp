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

#include "qase/report.hpp"

#include <sstream>

#include "qase/error.hpp"

namespace qase {

using nlohmann::json;

namespace {

std::string escape_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

std::string threshold_text(const Condition& c) {
  if (std::holds_alternative<bool>(c.threshold)) return std::get<bool>(c.threshold) ? "true" : "false";
  std::string t = format_number(std::get<double>(c.threshold));
  if (c.unit != Unit::kNone) t += std::string(to_string(c.unit));
  return t;
}

std::string measured_text(const Verdict& v) {
  if (!v.measured_value) return "n/a";
  return format_metric(*v.measured_value);
}

void check_shape(const TestPlan& plan, const std::vector<TestResult>& results) {
  if (results.size() != plan.cases.size()) {
    throw Error("plan " + plan.id + " has " + std::to_string(plan.cases.size()) + " cases but " +
                std::to_string(results.size()) + " results were given");
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    const TestCase& tc = plan.cases[i];
    const TestResult& r = results[i];
    if (r.test_case_id != tc.id) {
      throw Error("result " + std::to_string(i) + " is for " + r.test_case_id + ", expected " + tc.id);
    }
    if (r.verdicts.size() != tc.conditions.size()) {
      throw Error("result for " + tc.id + " has " + std::to_string(r.verdicts.size()) + " verdicts for " +
                  std::to_string(tc.conditions.size()) + " conditions");
    }
  }
}

}  // namespace

Report generate_report(const TestPlan& plan, const std::vector<TestResult>& results) {
  check_shape(plan, results);

  int passed = 0, failed = 0, errored = 0;
  for (const auto& r : results) {
    switch (r.status()) {
      case CaseStatus::kPassed: ++passed; break;
      case CaseStatus::kFailed: ++failed; break;
      case CaseStatus::kErrored: ++errored; break;
    }
  }
  Report report;
  report.overall = errored > 0 ? CaseStatus::kErrored : failed > 0 ? CaseStatus::kFailed : CaseStatus::kPassed;

  std::ostringstream md;
  md << "# Test report for plan " << plan.id << "\n\n";
  md << "Overall: **" << to_string(report.overall) << "** (" << passed << " passed, " << failed << " failed, "
     << errored << " errored, " << results.size() << " total)\n";

  json cases = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const TestCase& tc = plan.cases[i];
    const TestResult& r = results[i];
    const QAScenario* s = plan.scenario_for(tc);

    md << "\n## " << tc.scenario_id;
    if (s) md << " (" << s->quality_attribute.str() << ")";
    md << "\n\n";
    if (s) {
      md << "- Source: " << s->stimulus_source << "\n";
      md << "- Stimulus: " << s->stimulus << "\n";
      md << "- Environment: " << s->environment.str() << "\n";
      md << "- Artifact: " << QAScenario::kArtifact << "\n";
      md << "- Response: " << s->response << "\n";
    }
    md << "- Test case: `" << tc.id << "`, status **" << to_string(r.status()) << "**\n";
    if (r.error) md << "- Error: " << escape_cell(*r.error) << "\n";
    md << "\n| Condition | Measured | Threshold | Verdict | Evidence |\n";
    md << "|---|---|---|---|---|\n";

    json verdicts = json::array();
    for (std::size_t k = 0; k < r.verdicts.size(); ++k) {
      const Verdict& v = r.verdicts[k];
      const auto ev = r.evidence.find(v.condition.metric_path);
      std::string link = "none";
      if (ev != r.evidence.end()) {
        link = "[" + ev->second.substr(0, 12) + "](../../records/" + ev->second + ")";
      }
      md << "| `" << escape_cell(serialize_condition(v.condition)) << "` | " << measured_text(v) << " | "
         << threshold_text(v.condition) << " | " << to_string(v.status) << " | " << link << " |\n";
      if (v.status == VerdictStatus::kError && !v.detail.empty()) {
        md << "\n> " << escape_cell(v.detail) << "\n\n";
      }
      verdicts.push_back({{"condition", serialize_condition(v.condition)},
                          {"status", std::string(to_string(v.status))},
                          {"measured", v.measured_value ? metric_to_json(*v.measured_value) : json(nullptr)},
                          {"detail", v.detail},
                          {"evidence", ev == r.evidence.end() ? json(nullptr) : json(ev->second)}});
    }

    json metrics = json::object();
    for (const auto& [path, value] : r.metrics) metrics[path] = metric_to_json(value);
    cases.push_back({{"test_case_id", tc.id},
                     {"scenario_id", tc.scenario_id},
                     {"status", std::string(to_string(r.status()))},
                     {"error", r.error ? json(*r.error) : json(nullptr)},
                     {"verdicts", std::move(verdicts)},
                     {"metrics", std::move(metrics)}});
  }

  report.markdown = md.str();
  report.summary = {{"plan_id", plan.id},
                    {"overall", std::string(to_string(report.overall))},
                    {"counts", {{"pass", passed}, {"fail", failed}, {"error", errored}, {"total", results.size()}}},
                    {"cases", std::move(cases)}};
  return report;
}

}  // namespace qase
