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

#include "qase/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qase/error.hpp"

namespace qase::stats {
namespace {

void check_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw StatsError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

struct Ranking {
  std::vector<double> ranks;  // midranks, pooled order (sample1 then sample2)
  double tie_term = 0.0;      // sum over tie groups of t^3 - t
  bool has_ties = false;
};

Ranking midranks(std::span<const double> x, std::span<const double> y) {
  std::vector<double> pooled;
  pooled.reserve(x.size() + y.size());
  pooled.insert(pooled.end(), x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  for (double v : pooled) {
    if (std::isnan(v)) throw StatsError("wilcoxon_rank_sum: NaN in sample");
  }

  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });

  Ranking r;
  r.ranks.resize(pooled.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && pooled[order[j]] == pooled[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) r.ranks[order[k]] = mid;
    const double t = static_cast<double>(j - i);
    if (j - i > 1) {
      r.has_ties = true;
      r.tie_term += t * t * t - t;
    }
    i = j;
  }
  return r;
}

// counts[u] = number of size-n1 subsets of ranks 1..n1+n2 whose U equals u.
std::vector<std::uint64_t> exact_u_distribution(std::int64_t n1, std::int64_t n2) {
  const std::int64_t n = n1 + n2;
  const std::int64_t max_sum = n1 * (2 * n - n1 + 1) / 2;
  // dp[k][s]: subsets of size k drawn from the ranks seen so far, rank sum s.
  std::vector<std::vector<std::uint64_t>> dp(n1 + 1, std::vector<std::uint64_t>(max_sum + 1, 0));
  dp[0][0] = 1;
  for (std::int64_t rank = 1; rank <= n; ++rank) {
    for (std::int64_t k = std::min(rank, n1); k >= 1; --k) {
      for (std::int64_t s = max_sum; s >= rank; --s) dp[k][s] += dp[k - 1][s - rank];
    }
  }
  const std::int64_t offset = n1 * (n1 + 1) / 2;
  std::vector<std::uint64_t> counts(n1 * n2 + 1, 0);
  for (std::int64_t u = 0; u <= n1 * n2; ++u) counts[u] = dp[n1][u + offset];
  return counts;
}

}  // namespace

Rational accuracy(std::span<const std::string> predictions, std::span<const std::string> labels) {
  check_same_length(predictions.size(), labels.size(), "accuracy");
  if (predictions.empty()) throw StatsError("accuracy: empty input");
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) correct += predictions[i] == labels[i];
  return Rational(correct, static_cast<std::int64_t>(predictions.size()));
}

MetricSet GroupAccuracy::metrics() const {
  MetricSet m;
  m["accuracy.overall"] = MetricValue::ratio(overall.num(), overall.den());
  m["accuracy.min_group"] = MetricValue::ratio(min_group.num(), min_group.den());
  for (const auto& [group, tally] : per_group) {
    m["accuracy.group." + group] = MetricValue::ratio(tally.correct, tally.total);
  }
  return m;
}

GroupAccuracy group_accuracy(std::span<const std::string> predictions, std::span<const std::string> labels,
                             std::span<const std::string> groups, std::span<const std::string> required_groups) {
  check_same_length(predictions.size(), labels.size(), "group_accuracy");
  check_same_length(predictions.size(), groups.size(), "group_accuracy");
  if (predictions.empty()) throw StatsError("group_accuracy: empty input");

  GroupAccuracy out;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    GroupTally& t = out.per_group[groups[i]];
    ++t.total;
    t.correct += predictions[i] == labels[i];
  }
  for (const auto& g : required_groups) {
    if (!out.per_group.contains(g)) throw StatsError("required group \"" + g + "\" has no samples");
  }

  std::int64_t correct = 0;
  std::int64_t total = 0;
  bool first = true;
  for (const auto& [group, tally] : out.per_group) {
    correct += tally.correct;
    total += tally.total;
    const Rational acc = tally.accuracy();
    if (first || acc < out.min_group) out.min_group = acc;
    first = false;
  }
  out.overall = Rational(correct, total);
  return out;
}

std::vector<double> correctness_vector(std::span<const std::string> predictions,
                                       std::span<const std::string> labels) {
  check_same_length(predictions.size(), labels.size(), "correctness_vector");
  std::vector<double> v(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) v[i] = predictions[i] == labels[i] ? 1.0 : 0.0;
  return v;
}

StatTestResult wilcoxon_rank_sum(std::span<const double> sample1, std::span<const double> sample2,
                                 RankSumMethod method) {
  if (sample1.empty() || sample2.empty()) throw StatsError("wilcoxon_rank_sum: empty sample");
  const auto n1 = static_cast<std::int64_t>(sample1.size());
  const auto n2 = static_cast<std::int64_t>(sample2.size());
  const Ranking ranking = midranks(sample1, sample2);

  double r1 = 0.0;
  for (std::int64_t i = 0; i < n1; ++i) r1 += ranking.ranks[i];

  StatTestResult res;
  res.n1 = n1;
  res.n2 = n2;
  res.method = method;
  res.u_statistic = r1 - static_cast<double>(n1 * (n1 + 1)) / 2.0;
  res.tie_correction_applied = ranking.has_ties;

  if (method == RankSumMethod::kExact) {
    if (ranking.has_ties) throw StatsError("wilcoxon_rank_sum: exact path requires tie-free samples");
    if (n1 + n2 > 62) throw StatsError("wilcoxon_rank_sum: exact path limited to 62 pooled samples");
    res.tie_correction_applied = false;
    const auto counts = exact_u_distribution(n1, n2);
    const auto u = static_cast<std::int64_t>(std::llround(res.u_statistic));
    std::uint64_t total = 0;
    std::uint64_t le = 0;
    std::uint64_t ge = 0;
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(counts.size()); ++k) {
      total += counts[k];
      if (k <= u) le += counts[k];
      if (k >= u) ge += counts[k];
    }
    const std::uint64_t tail = std::min(le, ge);
    const Rational p = std::min(Rational(static_cast<std::int64_t>(2 * tail), static_cast<std::int64_t>(total)),
                                Rational(1, 1));
    res.p_exact = p;
    res.p_two_sided = p.to_double();
    return res;
  }

  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  const double n = dn1 + dn2;
  const double mean = dn1 * dn2 / 2.0;
  const double var = dn1 * dn2 / 12.0 * ((n + 1.0) - ranking.tie_term / (n * (n - 1.0)));
  if (!(var > 0.0)) {
    res.z_score = 0.0;
    res.p_two_sided = 1.0;
    return res;
  }
  const double diff = res.u_statistic - mean;
  const double corrected = std::max(std::abs(diff) - 0.5, 0.0);
  const double z = std::copysign(corrected, diff) / std::sqrt(var);
  res.z_score = z;
  res.p_two_sided = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
  return res;
}

StatTestResult wilcoxon_rank_sum(std::span<const double> sample1, std::span<const double> sample2) {
  if (sample1.empty() || sample2.empty()) throw StatsError("wilcoxon_rank_sum: empty sample");
  const auto pooled = static_cast<std::int64_t>(sample1.size() + sample2.size());
  const bool ties = midranks(sample1, sample2).has_ties;
  const RankSumMethod method =
      (pooled <= kExactMaxPooled && !ties) ? RankSumMethod::kExact : RankSumMethod::kNormalApprox;
  return wilcoxon_rank_sum(sample1, sample2, method);
}

}  // namespace qase::stats
