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

#include "qase/condition.hpp"

#include <charconv>
#include <cmath>
#include <cctype>

namespace qase {
namespace {

bool is_segment_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Condition parse() {
    Condition cond;
    skip_blanks();
    cond.metric_path = parse_path();
    skip_blanks();
    cond.comparator = parse_comparator();
    skip_blanks();
    parse_value(cond);
    skip_blanks();
    if (pos_ < text_.size()) fail("unexpected trailing input", pos_);
    return cond;
  }

 private:
  // 1-based column of byte offset `at`; end-of-input maps to the last
  // non-blank character.
  int column_of(std::size_t at) const {
    if (at < text_.size()) return static_cast<int>(at) + 1;
    std::size_t last = text_.size();
    while (last > 0 && is_blank(text_[last - 1])) --last;
    return last == 0 ? 1 : static_cast<int>(last);
  }

  [[noreturn]] void fail(const std::string& message, std::size_t at) const {
    const std::string what = at >= text_.size() ? "unexpected end of input, " + message : message;
    throw ConditionSyntaxError(what, column_of(at));
  }

  void skip_blanks() {
    while (pos_ < text_.size() && is_blank(text_[pos_])) ++pos_;
  }

  std::string parse_path() {
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !is_segment_char(text_[pos_])) {
      fail("expected metric path", pos_);
    }
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (is_segment_char(c)) {
        ++pos_;
      } else if (c == '.') {
        ++pos_;
        if (pos_ >= text_.size() || !is_segment_char(text_[pos_])) {
          fail("expected path segment after '.'", pos_);
        }
      } else if (is_blank(c) || c == '<' || c == '>' || c == '=' || c == '!') {
        break;
      } else {
        fail(std::string("invalid character '") + c + "' in metric path", pos_);
      }
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Comparator parse_comparator() {
    if (pos_ >= text_.size()) fail("expected comparator", pos_);
    const char c = text_[pos_];
    const bool eq_next = pos_ + 1 < text_.size() && text_[pos_ + 1] == '=';
    switch (c) {
      case '<':
        pos_ += eq_next ? 2 : 1;
        return eq_next ? Comparator::kLe : Comparator::kLt;
      case '>':
        pos_ += eq_next ? 2 : 1;
        return eq_next ? Comparator::kGe : Comparator::kGt;
      case '=':
        if (!eq_next) fail("expected '==', got single '='", pos_);
        pos_ += 2;
        return Comparator::kEq;
      case '!':
        if (!eq_next) fail("expected '!='", pos_);
        pos_ += 2;
        return Comparator::kNe;
      default:
        fail("expected comparator", pos_);
    }
  }

  bool match_word(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    const std::size_t after = pos_ + word.size();
    if (after < text_.size() && std::isalnum(static_cast<unsigned char>(text_[after]))) return false;
    pos_ = after;
    return true;
  }

  void parse_value(Condition& cond) {
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) fail("expected number or boolean", pos_);
    if (match_word("true") || match_word("false")) {
      cond.threshold = text_[start] == 't';
      if (cond.comparator != Comparator::kEq && cond.comparator != Comparator::kNe) {
        fail("boolean threshold requires == or !=", start);
      }
      skip_blanks();
      if (pos_ < text_.size()) fail("units do not apply to boolean thresholds", pos_);
      return;
    }

    // Scan the number lexically first so error columns are precise.
    std::size_t i = pos_;
    if (text_[i] == '+' || text_[i] == '-') ++i;
    const std::size_t int_start = i;
    while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
    if (i == int_start) fail("expected number or boolean", start);
    if (i < text_.size() && text_[i] == '.') {
      ++i;
      const std::size_t frac_start = i;
      while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
      if (i == frac_start) fail("expected digits after '.'", i);
    }
    if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < text_.size() && (text_[j] == '+' || text_[j] == '-')) ++j;
      const std::size_t exp_start = j;
      while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
      if (j == exp_start) fail("expected exponent digits", j);
      i = j;
    }

    // from_chars rejects a leading '+'.
    const std::size_t num_begin = text_[pos_] == '+' ? pos_ + 1 : pos_;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + num_begin, text_.data() + i, value);
    if (ec != std::errc() || ptr != text_.data() + i || !std::isfinite(value)) {
      fail("number out of range", start);
    }
    cond.threshold = value;
    pos_ = i;

    skip_blanks();
    if (pos_ >= text_.size()) return;
    const std::size_t unit_start = pos_;
    while (pos_ < text_.size() && !is_blank(text_[pos_])) ++pos_;
    const std::string_view unit = text_.substr(unit_start, pos_ - unit_start);
    if (unit == "%") {
      cond.unit = Unit::kPercent;
    } else if (unit == "MB") {
      cond.unit = Unit::kMB;
    } else if (unit == "GB") {
      cond.unit = Unit::kGB;
    } else if (unit == "ms") {
      cond.unit = Unit::kMs;
    } else {
      fail("unknown unit '" + std::string(unit) + "'", unit_start);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool compare_ordering(std::partial_ordering ord, Comparator c) {
  switch (c) {
    case Comparator::kLe: return ord == std::partial_ordering::less || ord == std::partial_ordering::equivalent;
    case Comparator::kLt: return ord == std::partial_ordering::less;
    case Comparator::kGe: return ord == std::partial_ordering::greater || ord == std::partial_ordering::equivalent;
    case Comparator::kGt: return ord == std::partial_ordering::greater;
    case Comparator::kEq: return ord == std::partial_ordering::equivalent;
    case Comparator::kNe: return ord != std::partial_ordering::equivalent;
  }
  return false;
}

}  // namespace

std::string_view to_string(Comparator c) {
  switch (c) {
    case Comparator::kLe: return "<=";
    case Comparator::kLt: return "<";
    case Comparator::kGe: return ">=";
    case Comparator::kGt: return ">";
    case Comparator::kEq: return "==";
    case Comparator::kNe: return "!=";
  }
  return "?";
}

std::string_view to_string(Unit u) {
  switch (u) {
    case Unit::kNone: return "";
    case Unit::kPercent: return "%";
    case Unit::kMB: return "MB";
    case Unit::kGB: return "GB";
    case Unit::kMs: return "ms";
  }
  return "";
}

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::kPass: return "PASS";
    case VerdictStatus::kFail: return "FAIL";
    case VerdictStatus::kError: return "ERROR";
  }
  return "ERROR";
}

MetricValue Condition::normalized_threshold() const {
  if (const auto* b = std::get_if<bool>(&threshold)) return MetricValue::boolean(*b);
  const double literal = std::get<double>(threshold);

  // Percent is native on *_percent paths and a fraction everywhere else.
  Rational scale(1, 1);
  switch (unit) {
    case Unit::kNone:
    case Unit::kMs:
      break;
    case Unit::kPercent:
      if (native_unit(metric_path) != "%") scale = Rational(1, 100);
      break;
    case Unit::kMB:
      scale = Rational(std::int64_t{1} << 20, 1);
      break;
    case Unit::kGB:
      scale = Rational(std::int64_t{1} << 30, 1);
      break;
  }

  std::optional<Rational> exact;
  if (auto base = Rational::from_double(literal)) exact = base->times(scale);
  const double value = exact ? exact->to_double() : literal * scale.to_double();
  return {value, exact};
}

Condition parse_condition(std::string_view text) { return Parser(text).parse(); }

std::string serialize_condition(const Condition& cond) {
  std::string out = cond.metric_path;
  out += ' ';
  out += to_string(cond.comparator);
  out += ' ';
  if (const auto* b = std::get_if<bool>(&cond.threshold)) {
    out += *b ? "true" : "false";
  } else {
    out += format_number(std::get<double>(cond.threshold));
    out += to_string(cond.unit);
  }
  return out;
}

Verdict errored_verdict(const Condition& cond, std::string detail) {
  Verdict v;
  v.condition = cond;
  v.status = VerdictStatus::kError;
  v.detail = std::move(detail);
  return v;
}

Verdict evaluate_condition(const Condition& cond, const MetricSet& metrics) {
  const auto it = metrics.find(cond.metric_path);
  if (it == metrics.end()) throw EvaluationError("no metric " + cond.metric_path);
  const MetricValue& measured = it->second;
  const MetricValue threshold = cond.normalized_threshold();

  if (measured.is_bool() != threshold.is_bool()) {
    throw EvaluationError("metric " + cond.metric_path + " is " +
                          (measured.is_bool() ? "boolean" : "numeric") +
                          " but the threshold is not");
  }

  std::partial_ordering ord = std::partial_ordering::unordered;
  if (measured.is_bool()) {
    ord = measured.as_bool() == threshold.as_bool() ? std::partial_ordering::equivalent
                                                    : std::partial_ordering::unordered;
  } else if (measured.exact && threshold.exact) {
    ord = *measured.exact <=> *threshold.exact;
  } else {
    ord = measured.as_double() <=> threshold.as_double();
  }

  Verdict v;
  v.condition = cond;
  v.measured_value = measured;
  v.status = compare_ordering(ord, cond.comparator) ? VerdictStatus::kPass : VerdictStatus::kFail;
  v.detail = "measured " + format_metric(measured) + " vs threshold " +
             std::string(to_string(cond.comparator)) + " " + format_metric(threshold);
  return v;
}

}  // namespace qase
