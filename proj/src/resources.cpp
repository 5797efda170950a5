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

#include "qase/resources.hpp"

#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "qase/error.hpp"

namespace qase {

double ResourceSeries::cpu_max_percent() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.cpu_percent);
  return m;
}

double ResourceSeries::cpu_mean_percent() const {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : samples) sum += s.cpu_percent;
  return sum / static_cast<double>(samples.size());
}

std::int64_t ResourceSeries::memory_peak_bytes() const {
  std::int64_t m = 0;
  for (const auto& s : samples) m = std::max(m, s.rss_bytes);
  return m;
}

MetricSet ResourceSeries::metrics() const {
  MetricSet m;
  m["resource.sample_count"] = MetricValue::integer(static_cast<std::int64_t>(samples.size()));
  if (samples.empty()) return m;
  m["cpu.max_percent"] = MetricValue::number(cpu_max_percent());
  m["cpu.mean_percent"] = MetricValue::number(cpu_mean_percent());
  m["memory.peak_bytes"] = MetricValue::integer(memory_peak_bytes());
  return m;
}

std::optional<ProcessStat> read_process_stat(pid_t pid) {
  const std::string base = "/proc/" + std::to_string(pid);
  std::ifstream stat_file(base + "/stat");
  if (!stat_file) return std::nullopt;
  std::string content;
  std::getline(stat_file, content);
  // The command name may contain spaces; fields resume after the last ')'.
  const auto close = content.rfind(')');
  if (close == std::string::npos) return std::nullopt;
  std::istringstream fields(content.substr(close + 2));
  std::string state;
  fields >> state;
  // Fields 4..13 precede utime (14) and stime (15).
  std::string skip;
  for (int i = 0; i < 10; ++i) fields >> skip;
  unsigned long long utime = 0;
  unsigned long long stime = 0;
  fields >> utime >> stime;
  if (!fields) return std::nullopt;

  static const long ticks = sysconf(_SC_CLK_TCK);
  static const long page = sysconf(_SC_PAGESIZE);
  ProcessStat s;
  s.cpu_seconds = static_cast<double>(utime + stime) / static_cast<double>(ticks);
  s.alive = state != "Z" && state != "X";

  std::ifstream statm(base + "/statm");
  long long size_pages = 0;
  long long resident_pages = 0;
  if (statm >> size_pages >> resident_pages) s.rss_bytes = resident_pages * page;
  return s;
}

ResourceMonitor::~ResourceMonitor() {
  if (thread_.joinable()) stop();
}

void ResourceMonitor::start(pid_t pid, int interval_ms) {
  if (thread_.joinable()) throw Error("resource monitor already running");
  series_ = ResourceSeries{};
  series_.sample_interval_ms = std::max(1, interval_ms);
  stop_requested_ = false;
  thread_ = std::thread([this, pid] { run(pid); });
}

ResourceSeries ResourceMonitor::stop() {
  {
    std::lock_guard lock(mutex_);
    stop_requested_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
  return series_;
}

void ResourceMonitor::run(pid_t pid) {
  using clock = std::chrono::steady_clock;
  const auto interval = std::chrono::milliseconds(series_.sample_interval_ms);
  const auto t0 = clock::now();

  std::optional<ProcessStat> prev = read_process_stat(pid);
  auto prev_time = clock::now();
  if (!prev || !prev->alive) {
    series_.truncated = true;
    return;
  }
  auto next = t0 + interval;
  for (;;) {
    bool stopping = false;
    {
      std::unique_lock lock(mutex_);
      stopping = cv_.wait_until(lock, next, [this] { return stop_requested_; });
    }
    // A run shorter than one interval still gets one sample spanning it.
    if (stopping && !series_.samples.empty()) break;
    const auto now = clock::now();
    const std::optional<ProcessStat> cur = read_process_stat(pid);
    if (!cur || !cur->alive) {
      series_.truncated = true;
      break;
    }
    const double wall = std::chrono::duration<double>(now - prev_time).count();
    ResourceSample sample;
    sample.timestamp_ms = std::chrono::duration<double, std::milli>(now - t0).count();
    sample.cpu_percent = wall > 0.0 ? (cur->cpu_seconds - prev->cpu_seconds) / wall * 100.0 : 0.0;
    sample.rss_bytes = cur->rss_bytes;
    if (series_.samples.empty() || sample.timestamp_ms > series_.samples.back().timestamp_ms) {
      series_.samples.push_back(sample);
    }
    prev = cur;
    prev_time = now;
    if (stopping) break;
    if (hook_) hook_();
    next += interval;
    if (next < clock::now()) next = clock::now() + interval;
  }
}

ResourceSeries monitor_resources(pid_t pid, int interval_ms) {
  ResourceMonitor monitor;
  monitor.start(pid, interval_ms);
  // The sampling thread ends on its own when the process exits.
  while (true) {
    const auto stat = read_process_stat(pid);
    if (!stat || !stat->alive) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(std::max(1, interval_ms / 4)));
  }
  return monitor.stop();
}

std::int64_t disk_usage(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::file_status status = fs::symlink_status(path, ec);
  if (ec || !fs::exists(status)) throw Error("disk_usage: path not found: " + path.string());
  if (fs::is_regular_file(status)) return static_cast<std::int64_t>(fs::file_size(path));
  if (!fs::is_directory(status)) return 0;

  std::int64_t total = 0;
  fs::recursive_directory_iterator it(path, fs::directory_options::none, ec);
  if (ec) throw Error("disk_usage: cannot read " + path.string() + ": " + ec.message());
  for (const fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
    if (ec) throw Error("disk_usage: cannot read under " + path.string() + ": " + ec.message());
    const fs::file_status st = it->symlink_status();
    if (fs::is_regular_file(st)) total += static_cast<std::int64_t>(it->file_size());
  }
  if (ec) throw Error("disk_usage: cannot read under " + path.string() + ": " + ec.message());
  return total;
}

}  // namespace qase
