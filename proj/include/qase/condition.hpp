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

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qase/error.hpp"
#include "qase/metrics.hpp"

namespace qase {

enum class Comparator { kLe, kLt, kGe, kGt, kEq, kNe };

// MB and GB are binary: 2^20 and 2^30 bytes.
enum class Unit { kNone, kPercent, kMB, kGB, kMs };

std::string_view to_string(Comparator c);
std::string_view to_string(Unit u);

// An atomic pass condition: `metric_path comparator threshold[unit]`.
//
// The threshold is kept as written (512 with unit MB), and normalized to the
// metric's native unit only at evaluation time, so serialization reproduces
// the author's form.
struct Condition {
  std::string metric_path;
  Comparator comparator = Comparator::kGe;
  std::variant<double, bool> threshold = 0.0;
  Unit unit = Unit::kNone;

  bool has_boolean_threshold() const { return std::holds_alternative<bool>(threshold); }

  // Threshold expressed in the metric's native unit.
  MetricValue normalized_threshold() const;

  friend bool operator==(const Condition&, const Condition&) = default;
};

// Syntax error in a condition string; column is 1-based.
class ConditionSyntaxError : public ParseError {
 public:
  ConditionSyntaxError(const std::string& message, int column)
      : ParseError("column " + std::to_string(column) + ": " + message, 1, column),
        message_(message) {}
  const std::string& message() const { return message_; }

 private:
  std::string message_;
};

// Grammar (whitespace allowed between tokens):
//
//   condition  = path comparator value [unit]
//   path       = segment { "." segment }      segment = [a-z_]+
//   comparator = "<=" | "<" | ">=" | ">" | "==" | "!="
//   value      = number | "true" | "false"
//   number     = ["-"|"+"] digits ["." digits] [("e"|"E") ["-"|"+"] digits]
//   unit       = "%" | "MB" | "GB" | "ms"
//
// Errors at end of input point at the last non-blank column.
Condition parse_condition(std::string_view text);

// Canonical text: single spaces around the comparator, unit attached to the
// number ("memory.peak_bytes <= 512MB").
std::string serialize_condition(const Condition& cond);

enum class VerdictStatus { kPass, kFail, kError };
std::string_view to_string(VerdictStatus s);

struct Verdict {
  Condition condition;
  std::optional<MetricValue> measured_value;
  VerdictStatus status = VerdictStatus::kError;
  std::string detail;

  bool pass() const { return status == VerdictStatus::kPass; }
};

// Compares the metric named by `cond` against its normalized threshold.
// Throws EvaluationError if the metric is absent or of the wrong kind.
Verdict evaluate_condition(const Condition& cond, const MetricSet& metrics);

// A verdict that could not be evaluated; carries the reason.
Verdict errored_verdict(const Condition& cond, std::string detail);

}  // namespace qase
