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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qase/metrics.hpp"

namespace qase::stats {

// Fraction of positions where prediction equals label, kept exact.
// Throws StatsError on length mismatch or empty input.
Rational accuracy(std::span<const std::string> predictions, std::span<const std::string> labels);

struct GroupTally {
  std::int64_t correct = 0;
  std::int64_t total = 0;
  Rational accuracy() const { return Rational(correct, total); }
};

struct GroupAccuracy {
  std::map<std::string, GroupTally> per_group;
  Rational min_group;
  Rational overall;

  // accuracy.overall, accuracy.min_group, accuracy.group.<name>
  MetricSet metrics() const;
};

// Throws StatsError if lengths differ or a required group has no samples.
GroupAccuracy group_accuracy(std::span<const std::string> predictions, std::span<const std::string> labels,
                             std::span<const std::string> groups,
                             std::span<const std::string> required_groups = {});

// 1.0 where predictions[i] == labels[i], else 0.0.
std::vector<double> correctness_vector(std::span<const std::string> predictions,
                                       std::span<const std::string> labels);

enum class RankSumMethod { kExact, kNormalApprox };

struct StatTestResult {
  double u_statistic = 0.0;  // Mann-Whitney U of sample 1
  std::optional<double> z_score;
  double p_two_sided = 1.0;
  RankSumMethod method = RankSumMethod::kExact;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  bool tie_correction_applied = false;
  // Exact path only: p_two_sided as a fraction of labelings.
  std::optional<Rational> p_exact;
};

// Largest pooled size for which the exact null distribution is used.
inline constexpr std::int64_t kExactMaxPooled = 20;

// Two-sided Wilcoxon rank-sum (Mann-Whitney U) test.
//
// Ties get midranks. Without ties and with n1 + n2 <= 20 the p-value comes
// from the exact null distribution of U over all C(n1+n2, n1) labelings;
// otherwise from the normal approximation with tie-corrected variance and a
// 0.5 continuity correction. p is twice the smaller tail, clamped to 1.
StatTestResult wilcoxon_rank_sum(std::span<const double> sample1, std::span<const double> sample2);

// Forces one computation path. The exact path throws StatsError when ties
// are present or the pooled size exceeds 62.
StatTestResult wilcoxon_rank_sum(std::span<const double> sample1, std::span<const double> sample2,
                                 RankSumMethod method);

}  // namespace qase::stats
