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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

namespace qase {

// Reduced fraction with a positive denominator. Used wherever a metric or a
// threshold is known exactly, so boundary comparisons (270/300 vs 0.9) are
// decided without floating-point rounding.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Multiplies by another rational; nullopt on int64 overflow.
  std::optional<Rational> times(const Rational& other) const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  // Exact value of the shortest decimal that round-trips `value`, or nullopt
  // when that decimal does not fit in 64-bit terms.
  static std::optional<Rational> from_double(double value);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// A single measured value. Numbers may carry an exact rational alongside the
// double; booleans never do.
struct MetricValue {
  std::variant<double, bool> value;
  std::optional<Rational> exact;

  static MetricValue number(double v) { return {v, std::nullopt}; }
  static MetricValue ratio(std::int64_t num, std::int64_t den) {
    Rational r(num, den);
    return {r.to_double(), r};
  }
  static MetricValue integer(std::int64_t v) { return {static_cast<double>(v), Rational(v, 1)}; }
  static MetricValue boolean(bool v) { return {v, std::nullopt}; }

  bool is_bool() const { return std::holds_alternative<bool>(value); }
  double as_double() const;
  bool as_bool() const { return std::get<bool>(value); }

  friend bool operator==(const MetricValue& a, const MetricValue& b) { return a.value == b.value; }
};

// Flat map from dotted metric path to value.
using MetricSet = std::map<std::string, MetricValue>;

// Shortest round-trip text for a double ("0.88", "536870912", "1e+30").
std::string format_number(double v);
std::string format_metric(const MetricValue& v);

// Native unit of a metric path, derived from its last segment suffix:
// *_bytes -> "bytes", *_percent -> "%", *_ms -> "ms", otherwise "".
std::string native_unit(const std::string& metric_path);

// True if `path` matches [a-z_]+(\.[a-z_]+)*.
bool is_valid_metric_path(const std::string& path);

}  // namespace qase
