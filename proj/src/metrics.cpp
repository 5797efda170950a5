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

#include "qase/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qase {
namespace {

using i128 = __int128;

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();

std::optional<std::int64_t> pow10(int k) {
  if (k < 0 || k > 18) return std::nullopt;
  std::int64_t p = 1;
  for (int i = 0; i < k; ++i) p *= 10;
  return p;
}

bool is_segment_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

std::optional<Rational> Rational::times(const Rational& other) const {
  i128 n = static_cast<i128>(num_) * other.num_;
  i128 d = static_cast<i128>(den_) * other.den_;
  i128 a = n < 0 ? -n : n;
  i128 b = d;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  if (n > kInt64Max || n < -kInt64Max || d > kInt64Max) return std::nullopt;
  return Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 lhs = static_cast<i128>(a.num_) * b.den_;
  const i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::optional<Rational> Rational::from_double(double value) {
  if (!std::isfinite(value)) return std::nullopt;
  const std::string text = format_number(value);

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '-') {
    negative = true;
    ++i;
  }
  std::int64_t mantissa = 0;
  int digits = 0;
  int frac_digits = 0;
  bool in_fraction = false;
  for (; i < text.size() && text[i] != 'e'; ++i) {
    if (text[i] == '.') {
      in_fraction = true;
      continue;
    }
    if (digits >= 18) return std::nullopt;
    mantissa = mantissa * 10 + (text[i] - '0');
    if (mantissa != 0) ++digits;
    if (in_fraction) ++frac_digits;
  }
  int exponent = 0;
  if (i < text.size()) exponent = std::atoi(text.c_str() + i + 1);
  const int net = exponent - frac_digits;
  if (negative) mantissa = -mantissa;
  if (net >= 0) {
    auto scale = pow10(net);
    if (!scale) return mantissa == 0 ? std::optional<Rational>(Rational(0, 1)) : std::nullopt;
    const i128 n = static_cast<i128>(mantissa) * *scale;
    if (n > kInt64Max || n < -kInt64Max) return std::nullopt;
    return Rational(static_cast<std::int64_t>(n), 1);
  }
  auto scale = pow10(-net);
  if (!scale) return std::nullopt;
  return Rational(mantissa, *scale);
}

double MetricValue::as_double() const {
  if (const auto* d = std::get_if<double>(&value)) return *d;
  return std::get<bool>(value) ? 1.0 : 0.0;
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

std::string format_metric(const MetricValue& v) {
  if (v.is_bool()) return v.as_bool() ? "true" : "false";
  return format_number(v.as_double());
}

std::string native_unit(const std::string& metric_path) {
  const auto dot = metric_path.rfind('.');
  const std::string leaf = dot == std::string::npos ? metric_path : metric_path.substr(dot + 1);
  auto ends_with = [&](std::string_view suffix) {
    return leaf.size() >= suffix.size() &&
           leaf.compare(leaf.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with("_bytes") || leaf == "bytes") return "bytes";
  if (ends_with("_percent") || leaf == "percent") return "%";
  if (ends_with("_ms") || leaf == "ms") return "ms";
  return "";
}

bool is_valid_metric_path(const std::string& path) {
  if (path.empty()) return false;
  bool segment_open = false;
  for (char c : path) {
    if (c == '.') {
      if (!segment_open) return false;
      segment_open = false;
    } else if (is_segment_char(c)) {
      segment_open = true;
    } else {
      return false;
    }
  }
  return segment_open;
}

}  // namespace qase
